#include "spdsim/spd/validate.hpp"

#include <set>
#include <string>

namespace spdsim::spd {
namespace {

const char* stimulusName(StimulusKind k) {
  switch (k) {
    case StimulusKind::CpuUtilization: return "cpu-utilization";
    case StimulusKind::QueueLength: return "queue-length";
    case StimulusKind::OperationResponseTime: return "response-time";
    case StimulusKind::NumberOfElements: return "element-count";
    case StimulusKind::SimulationTime: return "simulation-time";
  }
  return "?";
}

bool isWindowedKind(StimulusKind k) {
  return k == StimulusKind::CpuUtilization || k == StimulusKind::QueueLength ||
         k == StimulusKind::OperationResponseTime;
}

class Validator {
 public:
  Validator(const SpdModel& m, const arch::ArchitectureModel* a) : m_(m), arch_(a) {}

  std::vector<Diagnostic> run() {
    checkStructure();
    for (const auto& tg : m_.target_groups) {
      checkConstraints(tg.constraints);
      if (arch_) checkTargetReferences(tg);
    }
    for (const auto& p : m_.policies) {
      checkTrigger(p);
      checkAdjustment(p);
      checkConstraints(p.constraints);
    }
    return std::move(diags_);
  }

 private:
  void error(const std::string& code, const std::string& msg, const SourceSpan& span) {
    diags_.push_back({Severity::Error, code, msg, span});
  }

  void checkStructure() {
    std::set<std::string> names;
    for (const auto& tg : m_.target_groups) {
      if (!names.insert(tg.name).second)
        error("DUPLICATE_NAME", "target group \"" + tg.name + "\" is declared twice", tg.span);
      const std::string* hosting = nullptr;
      if (const auto* sg = std::get_if<ServiceGroup>(&tg.kind))
        hosting = &sg->hosting_infrastructure;
      else if (const auto* ccg = std::get_if<CompetingConsumersGroup>(&tg.kind))
        hosting = &ccg->hosting_infrastructure;
      if (hosting) {
        const TargetGroup* h = m_.findTargetGroup(*hosting);
        if (!h || !h->isInfrastructure())
          error("UNRESOLVED_HOSTING",
                "hosting infrastructure \"" + *hosting + "\" is not an "
                "elastic-infrastructure target in this definition", tg.span);
      }
    }

    if (m_.policies.empty())
      error("EMPTY_SPD", "policy definition declares no policies", m_.span);

    std::set<std::string> policy_names;
    int infra = 0, service = 0;
    for (const auto& p : m_.policies) {
      if (!policy_names.insert(p.name).second)
        error("DUPLICATE_NAME", "policy \"" + p.name + "\" is declared twice", p.span);
      const TargetGroup* tg = m_.findTargetGroup(p.target);
      if (!tg) {
        error("UNRESOLVED_TARGET",
              "policy \"" + p.name + "\" targets undeclared group \"" + p.target + "\"",
              p.span);
        continue;
      }
      (tg->isInfrastructure() ? infra : service)++;
    }
    if (infra > 0 && service > 0)
      error("MIXED_TARGET_KINDS",
            "policies mix infrastructure and service targets; a definition "
            "must scale one level only", m_.span);
  }

  void checkTrigger(const ScalingPolicy& p) {
    const Stimulus& s = p.trigger.stimulus;
    if (isWindowedKind(s.kind)) {
      if (!s.window_s || *s.window_s <= 0)
        error("BAD_WINDOW",
              std::string(stimulusName(s.kind)) + " needs a positive window", s.span);
    } else if (s.window_s) {
      error("BAD_WINDOW",
            std::string(stimulusName(s.kind)) + " is instantaneous and takes no window",
            s.span);
    }
    if (s.aggregation == Aggregation::Percentile) {
      if (s.kind != StimulusKind::OperationResponseTime)
        error("BAD_PERCENTILE", "percentile aggregation applies to response-time only",
              s.span);
      else if (s.percentile <= 0 || s.percentile > 100)
        error("BAD_PERCENTILE", "percentile must lie in (0, 100]", s.span);
    }

    if (const auto* fv = std::get_if<FireOnValue>(&p.trigger.behavior)) {
      bool ok = false;
      if (std::holds_alternative<ExpectedPercentage>(fv->expected))
        ok = s.kind == StimulusKind::CpuUtilization;
      else if (std::holds_alternative<ExpectedTime>(fv->expected))
        ok = s.kind == StimulusKind::OperationResponseTime;
      else
        ok = s.kind == StimulusKind::QueueLength ||
             s.kind == StimulusKind::NumberOfElements ||
             s.kind == StimulusKind::SimulationTime;
      if (!ok)
        error("DIMENSION_MISMATCH",
              std::string("threshold kind does not match ") + stimulusName(s.kind),
              p.trigger.span);

      if (const auto* pct = std::get_if<ExpectedPercentage>(&fv->expected)) {
        if (pct->value < 0 || pct->value > 100)
          error("BAD_EXPECTED", "percentage thresholds lie in [0, 100]", p.trigger.span);
      } else if (const auto* tm = std::get_if<ExpectedTime>(&fv->expected)) {
        if (tm->seconds <= 0)
          error("BAD_EXPECTED", "time thresholds must be positive", p.trigger.span);
      } else if (const auto* ct = std::get_if<ExpectedCount>(&fv->expected)) {
        if (ct->value < 0)
          error("BAD_EXPECTED", "count thresholds must be non-negative", p.trigger.span);
      }
    } else {
      const auto& ft = std::get<FireOnTrend>(p.trigger.behavior);
      if (!isWindowedKind(s.kind))
        error("TREND_NEEDS_WINDOW",
              std::string("trend triggers need a windowed stimulus, not ") +
                  stimulusName(s.kind),
              p.trigger.span);
      if (ft.window_count < 2)
        error("BAD_TREND", "trends need at least 2 windows", p.trigger.span);
    }
  }

  void checkAdjustment(const ScalingPolicy& p) {
    if (const auto* abs = std::get_if<AbsoluteAdjustment>(&p.adjustment)) {
      if (abs->goal < 1)
        error("ADJUSTMENT_INVALID", "absolute goal must be at least 1", p.adjustment_span);
    } else if (const auto* rel = std::get_if<RelativeAdjustment>(&p.adjustment)) {
      if (rel->percentage == 0 || rel->min_adjustment == 0 ||
          (rel->percentage > 0) != (rel->min_adjustment > 0))
        error("ADJUSTMENT_INVALID",
              "relative percentage and minimum must be nonzero and share a sign",
              p.adjustment_span);
    } else if (std::get<StepAdjustment>(p.adjustment).step == 0) {
      error("ADJUSTMENT_INVALID", "step must be nonzero", p.adjustment_span);
    }
  }

  void checkConstraints(const std::vector<Constraint>& cs) {
    for (const auto& c : cs) {
      if (const auto* cd = std::get_if<CooldownConstraint>(&c.rule)) {
        if (cd->duration_s <= 0)
          error("BAD_CONSTRAINT", "cooldown duration must be positive", c.span);
      } else if (const auto* iv = std::get_if<IntervalConstraint>(&c.rule)) {
        if (iv->active_from_s < 0 || iv->active_until_s < iv->active_from_s)
          error("BAD_CONSTRAINT", "interval needs 0 <= from <= until", c.span);
      } else {
        const auto& sz = std::get<SizeConstraint>(c.rule);
        if (sz.min_elements < 1 || sz.max_elements < sz.min_elements)
          error("BAD_CONSTRAINT", "size bounds need 1 <= min <= max", c.span);
      }
    }
  }

  void checkTargetReferences(const TargetGroup& tg) {
    if (const auto* ei = std::get_if<ElasticInfrastructure>(&tg.kind)) {
      if (!arch_->findContainer(ei->unit_container))
        error("UNRESOLVED_CONTAINER",
              "unit container \"" + ei->unit_container + "\" is not in the architecture",
              tg.span);
      return;
    }

    const std::string* unit = nullptr;
    const std::string* hosting = nullptr;
    if (const auto* sg = std::get_if<ServiceGroup>(&tg.kind)) {
      unit = &sg->unit_assembly;
      hosting = &sg->hosting_infrastructure;
      if (sg->load_balancer && !arch_->findAssembly(*sg->load_balancer))
        error("UNRESOLVED_ASSEMBLY",
              "load balancer \"" + *sg->load_balancer + "\" is not in the architecture",
              tg.span);
    } else {
      const auto& ccg = std::get<CompetingConsumersGroup>(tg.kind);
      unit = &ccg.unit_consumer;
      hosting = &ccg.hosting_infrastructure;
      if (!arch_->findQueue(ccg.queue))
        error("UNRESOLVED_QUEUE",
              "queue \"" + ccg.queue + "\" is not in the architecture", tg.span);
      const arch::Assembly* consumer = arch_->findAssembly(ccg.unit_consumer);
      if (consumer && consumer->consumes_queue != ccg.queue)
        error("CONSUMER_QUEUE_MISMATCH",
              "assembly \"" + ccg.unit_consumer + "\" does not consume queue \"" +
                  ccg.queue + "\"",
              tg.span);
    }

    const arch::Assembly* a = arch_->findAssembly(*unit);
    if (!a) {
      error("UNRESOLVED_ASSEMBLY",
            "unit assembly \"" + *unit + "\" is not in the architecture", tg.span);
      return;
    }
    // The unit must start on the hosting infrastructure's unit container, or
    // scaled replicas and the static deployment would disagree.
    const TargetGroup* host = m_.findTargetGroup(*hosting);
    if (host && host->isInfrastructure()) {
      const auto& ei = std::get<ElasticInfrastructure>(host->kind);
      const arch::Allocation* al = arch_->findAllocation(*unit);
      if (al && al->container != ei.unit_container)
        error("UNIT_NOT_ON_HOSTING",
              "unit \"" + *unit + "\" is allocated on \"" + al->container +
                  "\", outside its hosting infrastructure", tg.span);
    }
  }

  const SpdModel& m_;
  const arch::ArchitectureModel* arch_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> validateSpd(const SpdModel& model,
                                    const arch::ArchitectureModel* architecture) {
  return Validator(model, architecture).run();
}

}  // namespace spdsim::spd
