#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spdsim/diagnostics.hpp"

namespace spdsim::arch {

struct ConstantExpr {
  double value = 0;
  friend bool operator==(const ConstantExpr&, const ConstantExpr&) = default;
};
struct ExponentialExpr {
  double mean = 0;
  friend bool operator==(const ExponentialExpr&, const ExponentialExpr&) = default;
};
struct UniformExpr {
  double low = 0;
  double high = 0;
  friend bool operator==(const UniformExpr&, const UniformExpr&) = default;
};
using StochasticExpression = std::variant<ConstantExpr, ExponentialExpr, UniformExpr>;

double meanOf(const StochasticExpression& e);

struct Action;

// One CPU demand, drawn in work units and served by the hosting container.
struct InternalAction {
  StochasticExpression demand;
};

// Synchronous call to an operation of another component; the serving assembly
// is resolved through connectors, or uniquely by component when unambiguous.
struct ExternalCall {
  std::string component;
  std::string operation;
};

// Fire-and-forget enqueue to a broker queue; the issuing behavior continues
// immediately.
struct AsyncSend {
  std::string queue;
};

struct Branch {
  struct Arm {
    double probability = 0;
    std::vector<Action> actions;
  };
  std::vector<Arm> arms;
};

struct Action {
  std::variant<InternalAction, ExternalCall, AsyncSend, Branch> v;
  SourceSpan span;
};

struct ProvidedOperation {
  std::string name;
  std::vector<Action> behavior;
  SourceSpan span;
};

struct Component {
  std::string name;
  std::vector<ProvidedOperation> operations;
  SourceSpan span;

  const ProvidedOperation* findOperation(const std::string& op) const {
    for (const auto& o : operations)
      if (o.name == op) return &o;
    return nullptr;
  }
};

enum class Scheduling { ProcessorSharing, FirstComeFirstServed };

struct ResourceContainer {
  std::string name;
  double rate_wu_per_s = 0;  // > 0
  Scheduling scheduling = Scheduling::ProcessorSharing;
  SourceSpan span;
};

struct BrokerQueue {
  std::string name;
  SourceSpan span;
};

// Component instance. An assembly bound to a queue acts as a competing
// consumer: it pulls messages and runs the named operation for each. The
// operation may be left empty when the component provides exactly one.
struct Assembly {
  std::string name;
  std::string component;
  std::optional<std::string> consumes_queue;
  std::optional<std::string> consume_operation;
  SourceSpan span;
};

// Explicit wiring for an external call; only needed when more than one
// assembly instantiates the callee component.
struct Connector {
  std::string from_assembly;
  std::string to_component;
  std::string to_assembly;
  SourceSpan span;
};

struct Allocation {
  std::string assembly;
  std::string container;
  SourceSpan span;
};

struct ScenarioCall {
  double probability = 0;
  std::string assembly;
  std::string operation;
  SourceSpan span;
};

// Closed workload: population users cycling through think time and one
// scenario call drawn by probability.
struct UsageModel {
  int population = 0;
  StochasticExpression think_time = ConstantExpr{0};
  std::vector<ScenarioCall> scenario;
  SourceSpan span;
};

struct ArchitectureModel {
  std::string name;
  std::vector<Component> components;
  std::vector<ResourceContainer> containers;
  std::vector<BrokerQueue> queues;
  std::vector<Assembly> assemblies;
  std::vector<Connector> connectors;
  std::vector<Allocation> allocations;
  UsageModel usage;
  SourceSpan span;

  const Component* findComponent(const std::string& n) const {
    for (const auto& c : components)
      if (c.name == n) return &c;
    return nullptr;
  }
  const Assembly* findAssembly(const std::string& n) const {
    for (const auto& a : assemblies)
      if (a.name == n) return &a;
    return nullptr;
  }
  const ResourceContainer* findContainer(const std::string& n) const {
    for (const auto& c : containers)
      if (c.name == n) return &c;
    return nullptr;
  }
  const BrokerQueue* findQueue(const std::string& n) const {
    for (const auto& q : queues)
      if (q.name == n) return &q;
    return nullptr;
  }
  const Allocation* findAllocation(const std::string& assembly) const {
    for (const auto& al : allocations)
      if (al.assembly == assembly) return &al;
    return nullptr;
  }
};

enum class CallResolution { Ok, Unknown, Ambiguous };

struct ResolvedCall {
  const Assembly* assembly = nullptr;
  CallResolution status = CallResolution::Unknown;
};

// Resolves a synchronous call from the given assembly to the assembly serving
// the callee component: an explicit connector wins, otherwise the component's
// sole instantiating assembly.
ResolvedCall resolveCall(const ArchitectureModel& model, const std::string& from_assembly,
                         const std::string& to_component);

}  // namespace spdsim::arch
