#include "spdsim/arch/model.hpp"

namespace spdsim::arch {

double meanOf(const StochasticExpression& e) {
  if (const auto* c = std::get_if<ConstantExpr>(&e)) return c->value;
  if (const auto* x = std::get_if<ExponentialExpr>(&e)) return x->mean;
  const auto& u = std::get<UniformExpr>(e);
  return (u.low + u.high) / 2.0;
}

ResolvedCall resolveCall(const ArchitectureModel& model, const std::string& from_assembly,
                         const std::string& to_component) {
  for (const auto& c : model.connectors)
    if (c.from_assembly == from_assembly && c.to_component == to_component) {
      const Assembly* a = model.findAssembly(c.to_assembly);
      if (a) return {a, CallResolution::Ok};
    }
  const Assembly* match = nullptr;
  for (const auto& a : model.assemblies) {
    if (a.component != to_component) continue;
    if (match) return {nullptr, CallResolution::Ambiguous};
    match = &a;
  }
  if (!match) return {nullptr, CallResolution::Unknown};
  return {match, CallResolution::Ok};
}

}  // namespace spdsim::arch
