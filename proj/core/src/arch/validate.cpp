#include "spdsim/arch/validate.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>

namespace spdsim::arch {
namespace {

constexpr double kProbTolerance = 1e-9;

class ArchValidator {
 public:
  explicit ArchValidator(const ArchitectureModel& m) : m_(m) {}

  std::vector<Diagnostic> run() {
    checkDuplicates();
    checkContainers();
    checkComponents();
    checkAssemblies();
    checkConnectors();
    checkUsage();
    checkCallCycles();
    return std::move(diags_);
  }

 private:
  void error(const std::string& code, const std::string& msg, const SourceSpan& span) {
    diags_.push_back({Severity::Error, code, msg, span});
  }

  void checkDuplicates() {
    std::set<std::string> seen;
    for (const auto& c : m_.components)
      if (!seen.insert("comp:" + c.name).second)
        error("DUPLICATE_NAME", "component \"" + c.name + "\" is declared twice", c.span);
    for (const auto& c : m_.containers)
      if (!seen.insert("cont:" + c.name).second)
        error("DUPLICATE_NAME", "container \"" + c.name + "\" is declared twice", c.span);
    for (const auto& q : m_.queues)
      if (!seen.insert("queue:" + q.name).second)
        error("DUPLICATE_NAME", "queue \"" + q.name + "\" is declared twice", q.span);
    for (const auto& a : m_.assemblies)
      if (!seen.insert("asm:" + a.name).second)
        error("DUPLICATE_NAME", "assembly \"" + a.name + "\" is declared twice", a.span);
  }

  void checkContainers() {
    for (const auto& c : m_.containers)
      if (!(c.rate_wu_per_s > 0))
        error("NONPOSITIVE_RATE",
              "container \"" + c.name + "\" needs a positive processing rate", c.span);
  }

  void checkExpression(const StochasticExpression& e, const SourceSpan& span) {
    if (const auto* c = std::get_if<ConstantExpr>(&e)) {
      if (c->value < 0)
        error("BAD_EXPRESSION", "constants must be non-negative", span);
    } else if (const auto* x = std::get_if<ExponentialExpr>(&e)) {
      if (!(x->mean > 0))
        error("BAD_EXPRESSION", "exponential means must be positive", span);
    } else {
      const auto& u = std::get<UniformExpr>(e);
      if (u.low < 0 || u.high < u.low)
        error("BAD_EXPRESSION", "uniform bounds need 0 <= low <= high", span);
    }
  }

  void walkActions(const std::vector<Action>& actions,
                   const std::function<void(const Action&)>& visit) {
    for (const auto& a : actions) {
      visit(a);
      if (const auto* br = std::get_if<Branch>(&a.v))
        for (const auto& arm : br->arms) walkActions(arm.actions, visit);
    }
  }

  void checkComponents() {
    for (const auto& c : m_.components) {
      std::set<std::string> ops;
      for (const auto& op : c.operations) {
        if (!ops.insert(op.name).second)
          error("DUPLICATE_NAME",
                "operation \"" + op.name + "\" of \"" + c.name + "\" is declared twice",
                op.span);
        checkBehavior(c, op);
      }
    }
  }

  void checkBehavior(const Component& c, const ProvidedOperation& op) {
    walkActions(op.behavior, [&](const Action& a) {
      if (const auto* ia = std::get_if<InternalAction>(&a.v)) {
        checkExpression(ia->demand, a.span);
      } else if (const auto* call = std::get_if<ExternalCall>(&a.v)) {
        const Component* callee = m_.findComponent(call->component);
        if (!callee) {
          error("UNRESOLVED_COMPONENT",
                "call from \"" + c.name + "." + op.name + "\" targets unknown component \"" +
                    call->component + "\"",
                a.span);
        } else if (!callee->findOperation(call->operation)) {
          error("UNRESOLVED_OPERATION",
                "component \"" + call->component + "\" provides no operation \"" +
                    call->operation + "\"",
                a.span);
        }
      } else if (const auto* send = std::get_if<AsyncSend>(&a.v)) {
        if (!m_.findQueue(send->queue))
          error("UNRESOLVED_QUEUE", "send targets unknown queue \"" + send->queue + "\"",
                a.span);
      } else if (const auto* br = std::get_if<Branch>(&a.v)) {
        double sum = 0;
        for (const auto& arm : br->arms) {
          if (arm.probability < 0 || arm.probability > 1)
            error("PROB_SUM", "branch probabilities lie in [0, 1]", a.span);
          sum += arm.probability;
        }
        if (std::abs(sum - 1.0) > kProbTolerance)
          error("PROB_SUM", "branch probabilities must sum to 1", a.span);
      }
    });
  }

  void checkAssemblies() {
    std::set<std::string> allocated;
    for (const auto& al : m_.allocations) {
      if (!m_.findAssembly(al.assembly))
        error("UNRESOLVED_ASSEMBLY",
              "allocation names unknown assembly \"" + al.assembly + "\"", al.span);
      if (!m_.findContainer(al.container))
        error("UNRESOLVED_CONTAINER",
              "allocation names unknown container \"" + al.container + "\"", al.span);
      if (!allocated.insert(al.assembly).second)
        error("DUPLICATE_NAME",
              "assembly \"" + al.assembly + "\" is allocated twice", al.span);
    }

    for (const auto& a : m_.assemblies) {
      const Component* comp = m_.findComponent(a.component);
      if (!comp)
        error("UNRESOLVED_COMPONENT",
              "assembly \"" + a.name + "\" instantiates unknown component \"" +
                  a.component + "\"",
              a.span);
      if (!allocated.count(a.name))
        error("UNALLOCATED", "assembly \"" + a.name + "\" is not allocated", a.span);

      if (a.consumes_queue) {
        if (!m_.findQueue(*a.consumes_queue))
          error("UNRESOLVED_QUEUE",
                "assembly \"" + a.name + "\" consumes unknown queue \"" +
                    *a.consumes_queue + "\"",
                a.span);
        if (comp) {
          if (a.consume_operation) {
            if (!comp->findOperation(*a.consume_operation))
              error("UNRESOLVED_OPERATION",
                    "component \"" + a.component + "\" provides no operation \"" +
                        *a.consume_operation + "\"",
                    a.span);
          } else if (comp->operations.size() != 1) {
            error("AMBIGUOUS_HANDLER",
                  "assembly \"" + a.name + "\" consumes a queue but \"" + a.component +
                      "\" provides more than one operation; name one with 'with'",
                  a.span);
          }
        }
      }

      // Every synchronous call made by this assembly must resolve to exactly
      // one serving assembly.
      if (comp) {
        for (const auto& op : comp->operations) {
          walkActions(op.behavior, [&](const Action& act) {
            const auto* call = std::get_if<ExternalCall>(&act.v);
            if (!call || !m_.findComponent(call->component)) return;
            auto r = resolveCall(m_, a.name, call->component);
            if (r.status == CallResolution::Unknown)
              error("UNRESOLVED_COMPONENT",
                    "no assembly instantiates \"" + call->component +
                        "\" for calls from \"" + a.name + "\"",
                    act.span);
            else if (r.status == CallResolution::Ambiguous)
              error("AMBIGUOUS_CALL",
                    "several assemblies instantiate \"" + call->component +
                        "\"; wire calls from \"" + a.name + "\" with 'connect'",
                    act.span);
          });
        }
      }
    }
  }

  void checkConnectors() {
    for (const auto& c : m_.connectors) {
      if (!m_.findAssembly(c.from_assembly))
        error("BAD_CONNECTOR",
              "connector source \"" + c.from_assembly + "\" is unknown", c.span);
      const Assembly* to = m_.findAssembly(c.to_assembly);
      if (!to)
        error("BAD_CONNECTOR",
              "connector destination \"" + c.to_assembly + "\" is unknown", c.span);
      else if (to->component != c.to_component)
        error("BAD_CONNECTOR",
              "assembly \"" + c.to_assembly + "\" does not instantiate \"" +
                  c.to_component + "\"",
              c.span);
    }
  }

  void checkUsage() {
    const UsageModel& u = m_.usage;
    if (u.population < 1)
      error("BAD_POPULATION", "population must be at least 1", u.span);
    checkExpression(u.think_time, u.span);
    if (u.scenario.empty()) {
      error("PROB_SUM", "usage scenario declares no calls", u.span);
      return;
    }
    double sum = 0;
    for (const auto& sc : u.scenario) {
      if (sc.probability < 0 || sc.probability > 1)
        error("PROB_SUM", "scenario probabilities lie in [0, 1]", sc.span);
      sum += sc.probability;
      const Assembly* a = m_.findAssembly(sc.assembly);
      if (!a) {
        error("UNRESOLVED_ASSEMBLY",
              "scenario calls unknown assembly \"" + sc.assembly + "\"", sc.span);
        continue;
      }
      const Component* comp = m_.findComponent(a->component);
      if (comp && !comp->findOperation(sc.operation))
        error("UNRESOLVED_OPERATION",
              "component \"" + a->component + "\" provides no operation \"" +
                  sc.operation + "\"",
              sc.span);
    }
    if (std::abs(sum - 1.0) > kProbTolerance)
      error("PROB_SUM", "scenario probabilities must sum to 1", u.span);
  }

  void checkCallCycles() {
    // Synchronous calls only; queued hand-offs do not block the sender.
    enum class Color { White, Grey, Black };
    std::map<std::pair<std::string, std::string>, Color> color;
    bool reported = false;

    std::function<void(const Component&, const ProvidedOperation&)> visit =
        [&](const Component& c, const ProvidedOperation& op) {
          auto key = std::make_pair(c.name, op.name);
          color[key] = Color::Grey;
          walkActions(op.behavior, [&](const Action& a) {
            const auto* call = std::get_if<ExternalCall>(&a.v);
            if (!call || reported) return;
            const Component* callee = m_.findComponent(call->component);
            if (!callee) return;
            const ProvidedOperation* callee_op = callee->findOperation(call->operation);
            if (!callee_op) return;
            auto callee_key = std::make_pair(callee->name, callee_op->name);
            auto it = color.find(callee_key);
            if (it != color.end() && it->second == Color::Grey) {
              error("CALL_CYCLE",
                    "synchronous call cycle through \"" + c.name + "." + op.name +
                        "\" and \"" + callee->name + "." + callee_op->name + "\"",
                    a.span);
              reported = true;
            } else if (it == color.end() || it->second == Color::White) {
              visit(*callee, *callee_op);
            }
          });
          color[key] = Color::Black;
        };

    for (const auto& c : m_.components)
      for (const auto& op : c.operations) {
        auto key = std::make_pair(c.name, op.name);
        if (!color.count(key) || color[key] == Color::White) visit(c, op);
      }
  }

  const ArchitectureModel& m_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> validateArchitecture(const ArchitectureModel& model) {
  return ArchValidator(model).run();
}

}  // namespace spdsim::arch
