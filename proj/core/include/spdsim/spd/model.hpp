#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spdsim/diagnostics.hpp"

namespace spdsim::spd {

enum class RelationalOperator {
  GreaterThan,
  GreaterThanOrEqual,
  LessThan,
  LessThanOrEqual,
  EqualTo,
};

enum class TrendPattern { Increasing, Decreasing };

enum class StimulusKind {
  CpuUtilization,       // percent, windowed
  QueueLength,          // count, windowed
  OperationResponseTime,// seconds, windowed
  NumberOfElements,     // count, instantaneous
  SimulationTime,       // seconds since start, instantaneous
};

enum class Aggregation { Average, Percentile };

// What a trigger observes. Windowed kinds aggregate samples over the trailing
// window; instantaneous kinds read the current value and carry no window.
struct Stimulus {
  StimulusKind kind = StimulusKind::CpuUtilization;
  std::optional<double> window_s;
  Aggregation aggregation = Aggregation::Average;
  double percentile = 95.0;  // used when aggregation == Percentile
  SourceSpan span;

  friend bool operator==(const Stimulus& a, const Stimulus& b) {
    if (a.kind != b.kind || a.window_s != b.window_s ||
        a.aggregation != b.aggregation)
      return false;
    if (a.aggregation == Aggregation::Percentile && a.percentile != b.percentile)
      return false;
    return true;
  }
};

struct ExpectedPercentage {
  double value = 0;  // 0..100
  friend bool operator==(const ExpectedPercentage&, const ExpectedPercentage&) = default;
};
struct ExpectedTime {
  double seconds = 0;  // > 0
  friend bool operator==(const ExpectedTime&, const ExpectedTime&) = default;
};
struct ExpectedCount {
  long value = 0;  // >= 0
  friend bool operator==(const ExpectedCount&, const ExpectedCount&) = default;
};
using ExpectedValue = std::variant<ExpectedPercentage, ExpectedTime, ExpectedCount>;

struct FireOnValue {
  RelationalOperator op = RelationalOperator::GreaterThan;
  ExpectedValue expected;
  friend bool operator==(const FireOnValue&, const FireOnValue&) = default;
};
struct FireOnTrend {
  TrendPattern trend = TrendPattern::Increasing;
  int window_count = 3;
  friend bool operator==(const FireOnTrend&, const FireOnTrend&) = default;
};

struct ScalingTrigger {
  Stimulus stimulus;
  std::variant<FireOnValue, FireOnTrend> behavior;
  SourceSpan span;

  friend bool operator==(const ScalingTrigger& a, const ScalingTrigger& b) {
    return a.stimulus == b.stimulus && a.behavior == b.behavior;
  }
};

struct AbsoluteAdjustment {
  int goal = 1;  // >= 1
  friend bool operator==(const AbsoluteAdjustment&, const AbsoluteAdjustment&) = default;
};
struct RelativeAdjustment {
  int percentage = 0;      // nonzero; sign gives direction
  int min_adjustment = 0;  // nonzero; same sign as percentage
  friend bool operator==(const RelativeAdjustment&, const RelativeAdjustment&) = default;
};
struct StepAdjustment {
  int step = 0;  // nonzero
  friend bool operator==(const StepAdjustment&, const StepAdjustment&) = default;
};
using AdjustmentType = std::variant<AbsoluteAdjustment, RelativeAdjustment, StepAdjustment>;

enum class ConstraintScope { Policy, Target };

struct CooldownConstraint {
  double duration_s = 0;  // > 0; prohibits re-enactment within the duration
  friend bool operator==(const CooldownConstraint&, const CooldownConstraint&) = default;
};
struct IntervalConstraint {
  double active_from_s = 0;
  double active_until_s = 0;  // >= active_from_s; prohibits outside the interval
  friend bool operator==(const IntervalConstraint&, const IntervalConstraint&) = default;
};
struct SizeConstraint {
  int min_elements = 1;  // >= 1
  int max_elements = 1;  // >= min_elements; clamps proposed sizes
  friend bool operator==(const SizeConstraint&, const SizeConstraint&) = default;
};

struct Constraint {
  std::variant<CooldownConstraint, IntervalConstraint, SizeConstraint> rule;
  ConstraintScope scope = ConstraintScope::Policy;
  SourceSpan span;

  bool prohibiting() const {
    return !std::holds_alternative<SizeConstraint>(rule);
  }

  friend bool operator==(const Constraint& a, const Constraint& b) {
    return a.rule == b.rule && a.scope == b.scope;
  }
};

struct ElasticInfrastructure {
  std::string unit_container;  // container name in the architecture model
  friend bool operator==(const ElasticInfrastructure&, const ElasticInfrastructure&) = default;
};
struct ServiceGroup {
  std::string unit_assembly;
  std::optional<std::string> load_balancer;  // assembly; absent = implicit dispatcher
  std::string hosting_infrastructure;        // ElasticInfrastructure group name
  friend bool operator==(const ServiceGroup&, const ServiceGroup&) = default;
};
struct CompetingConsumersGroup {
  std::string unit_consumer;  // assembly bound to the queue
  std::string queue;
  std::string hosting_infrastructure;
  friend bool operator==(const CompetingConsumersGroup&, const CompetingConsumersGroup&) = default;
};
using TargetGroupKind =
    std::variant<ElasticInfrastructure, ServiceGroup, CompetingConsumersGroup>;

struct TargetGroup {
  std::string name;
  TargetGroupKind kind;
  std::vector<Constraint> constraints;  // Target scope
  SourceSpan span;

  bool isInfrastructure() const {
    return std::holds_alternative<ElasticInfrastructure>(kind);
  }

  friend bool operator==(const TargetGroup& a, const TargetGroup& b) {
    return a.name == b.name && a.kind == b.kind && a.constraints == b.constraints;
  }
};

struct ScalingPolicy {
  std::string name;
  bool active = true;
  std::string target;  // TargetGroup name
  ScalingTrigger trigger;
  AdjustmentType adjustment;
  std::vector<Constraint> constraints;  // Policy scope
  SourceSpan span;
  SourceSpan adjustment_span;

  friend bool operator==(const ScalingPolicy& a, const ScalingPolicy& b) {
    return a.name == b.name && a.active == b.active && a.target == b.target &&
           a.trigger == b.trigger && a.adjustment == b.adjustment &&
           a.constraints == b.constraints;
  }
};

struct SpdModel {
  std::string name;
  std::vector<TargetGroup> target_groups;
  std::vector<ScalingPolicy> policies;
  SourceSpan span;

  const TargetGroup* findTargetGroup(const std::string& name_) const {
    for (const auto& tg : target_groups)
      if (tg.name == name_) return &tg;
    return nullptr;
  }

  friend bool operator==(const SpdModel& a, const SpdModel& b) {
    return a.name == b.name && a.target_groups == b.target_groups &&
           a.policies == b.policies;
  }
};

}  // namespace spdsim::spd
