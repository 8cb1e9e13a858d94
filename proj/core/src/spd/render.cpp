#include "spdsim/spd/render.hpp"

#include <sstream>

#include "text/fmt.hpp"

namespace spdsim::spd {
namespace {

using text::fmtDouble;
using text::fmtPercent;
using text::fmtSeconds;

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

const char* stimulusWord(StimulusKind k) {
  switch (k) {
    case StimulusKind::CpuUtilization: return "cpu-utilization";
    case StimulusKind::QueueLength: return "queue-length";
    case StimulusKind::OperationResponseTime: return "response-time";
    case StimulusKind::NumberOfElements: return "element-count";
    case StimulusKind::SimulationTime: return "simulation-time";
  }
  return "?";
}

const char* opWord(RelationalOperator op) {
  switch (op) {
    case RelationalOperator::GreaterThan: return ">";
    case RelationalOperator::GreaterThanOrEqual: return ">=";
    case RelationalOperator::LessThan: return "<";
    case RelationalOperator::LessThanOrEqual: return "<=";
    case RelationalOperator::EqualTo: return "=";
  }
  return "?";
}

std::string expectedText(const ExpectedValue& e) {
  if (const auto* p = std::get_if<ExpectedPercentage>(&e)) return fmtPercent(p->value);
  if (const auto* t = std::get_if<ExpectedTime>(&e)) return fmtSeconds(t->seconds);
  return std::to_string(std::get<ExpectedCount>(e).value);
}

std::string stimulusText(const Stimulus& s) {
  std::string out = stimulusWord(s.kind);
  if (s.window_s) out += " window " + fmtSeconds(*s.window_s);
  if (s.window_s) {
    if (s.aggregation == Aggregation::Percentile)
      out += " p" + fmtDouble(s.percentile);
    else
      out += " avg";
  }
  return out;
}

void renderConstraint(std::ostringstream& os, const Constraint& c,
                      const char* indent) {
  os << indent << "constraint ";
  if (const auto* cd = std::get_if<CooldownConstraint>(&c.rule)) {
    os << "cooldown " << fmtSeconds(cd->duration_s);
  } else if (const auto* iv = std::get_if<IntervalConstraint>(&c.rule)) {
    os << "interval from " << fmtSeconds(iv->active_from_s) << " until "
       << fmtSeconds(iv->active_until_s);
  } else {
    const auto& sz = std::get<SizeConstraint>(c.rule);
    os << "size min " << sz.min_elements << " max " << sz.max_elements;
  }
  os << "\n";
}

}  // namespace

std::string renderSpd(const SpdModel& model) {
  std::ostringstream os;
  os << "spd " << quoted(model.name) << " {\n";

  for (const auto& tg : model.target_groups) {
    if (const auto* ei = std::get_if<ElasticInfrastructure>(&tg.kind)) {
      os << "  target elastic-infrastructure " << quoted(tg.name) << " {\n";
      os << "    unit container " << quoted(ei->unit_container) << "\n";
    } else if (const auto* sg = std::get_if<ServiceGroup>(&tg.kind)) {
      os << "  target service-group " << quoted(tg.name) << " {\n";
      os << "    unit assembly " << quoted(sg->unit_assembly) << "\n";
      if (sg->load_balancer)
        os << "    load-balancer " << quoted(*sg->load_balancer) << "\n";
      os << "    hosting " << quoted(sg->hosting_infrastructure) << "\n";
    } else {
      const auto& ccg = std::get<CompetingConsumersGroup>(tg.kind);
      os << "  target competing-consumers-group " << quoted(tg.name) << " {\n";
      os << "    unit consumer " << quoted(ccg.unit_consumer) << "\n";
      os << "    queue " << quoted(ccg.queue) << "\n";
      os << "    hosting " << quoted(ccg.hosting_infrastructure) << "\n";
    }
    for (const auto& c : tg.constraints) renderConstraint(os, c, "    ");
    os << "  }\n";
  }

  for (const auto& p : model.policies) {
    os << "  policy " << quoted(p.name) << (p.active ? " active" : " inactive")
       << " {\n";
    os << "    target " << quoted(p.target) << "\n";

    os << "    trigger ";
    if (const auto* fv = std::get_if<FireOnValue>(&p.trigger.behavior)) {
      os << "fire-on-value " << stimulusText(p.trigger.stimulus) << " "
         << opWord(fv->op) << " " << expectedText(fv->expected);
    } else {
      const auto& ft = std::get<FireOnTrend>(p.trigger.behavior);
      os << "fire-on-trend " << stimulusText(p.trigger.stimulus) << " "
         << (ft.trend == TrendPattern::Increasing ? "increasing" : "decreasing")
         << " over " << ft.window_count;
    }
    os << "\n";

    os << "    adjust ";
    if (const auto* abs = std::get_if<AbsoluteAdjustment>(&p.adjustment)) {
      os << "absolute " << abs->goal;
    } else if (const auto* rel = std::get_if<RelativeAdjustment>(&p.adjustment)) {
      os << "relative " << rel->percentage << "% min " << rel->min_adjustment;
    } else {
      const auto& st = std::get<StepAdjustment>(p.adjustment);
      os << "step " << (st.step > 0 ? "+" : "") << st.step;
    }
    os << "\n";

    for (const auto& c : p.constraints) renderConstraint(os, c, "    ");
    os << "  }\n";
  }

  os << "}\n";
  return os.str();
}

std::string exportNotationDot(const SpdModel& model) {
  std::ostringstream os;
  const double kDefaultWindow = 60.0;

  auto label = [](const std::string& s) { return quoted(s); };

  auto stimulusShort = [&](const Stimulus& s) {
    std::string out;
    switch (s.kind) {
      case StimulusKind::CpuUtilization: out = "cpuUtil"; break;
      case StimulusKind::QueueLength: out = "queueLength"; break;
      case StimulusKind::OperationResponseTime: out = "respTime"; break;
      case StimulusKind::NumberOfElements: out = "elementCount"; break;
      case StimulusKind::SimulationTime: out = "simTime"; break;
    }
    if (s.window_s && s.aggregation == Aggregation::Percentile)
      out += ".p" + fmtDouble(s.percentile);
    if (s.window_s && *s.window_s != kDefaultWindow)
      out += "(" + fmtSeconds(*s.window_s) + ")";
    return out;
  };

  os << "digraph spd {\n";
  os << "  rankdir=LR;\n";

  int constraint_id = 0;
  auto emitConstraint = [&](const Constraint& c, const char* indent) {
    std::string text;
    if (const auto* cd = std::get_if<CooldownConstraint>(&c.rule))
      text = "CD=" + fmtSeconds(cd->duration_s);
    else if (const auto* iv = std::get_if<IntervalConstraint>(&c.rule))
      text = "ACT=[" + fmtSeconds(iv->active_from_s) + "," +
             fmtSeconds(iv->active_until_s) + "]";
    else {
      const auto& sz = std::get<SizeConstraint>(c.rule);
      text = "SZ=[" + std::to_string(sz.min_elements) + "," +
             std::to_string(sz.max_elements) + "]";
    }
    os << indent << "c" << constraint_id++ << " [shape=octagon, label="
       << label(text) << "];\n";
  };

  for (size_t i = 0; i < model.target_groups.size(); ++i) {
    const auto& tg = model.target_groups[i];
    os << "  subgraph cluster_t" << i << " {\n";
    os << "    style=invis;\n";
    os << "    t" << i << " [shape=circle, style=dashed, label=" << label(tg.name)
       << "];\n";
    for (const auto& c : tg.constraints) emitConstraint(c, "    ");
    os << "  }\n";
  }

  for (size_t i = 0; i < model.policies.size(); ++i) {
    const auto& p = model.policies[i];
    os << "  subgraph cluster_p" << i << " {\n";
    os << "    style=invis;\n";
    os << "    p" << i << " [shape=box, label=" << label(p.name) << "];\n";

    std::string trig;
    if (const auto* fv = std::get_if<FireOnValue>(&p.trigger.behavior)) {
      trig = stimulusShort(p.trigger.stimulus) + " " + opWord(fv->op) + " " +
             expectedText(fv->expected);
    } else {
      const auto& ft = std::get<FireOnTrend>(p.trigger.behavior);
      trig = stimulusShort(p.trigger.stimulus) +
             (ft.trend == TrendPattern::Increasing ? " increasing" : " decreasing") +
             " over " + std::to_string(ft.window_count);
    }
    os << "    tr" << i << " [shape=square, label=" << label(trig) << "];\n";

    std::string adj;
    if (const auto* abs = std::get_if<AbsoluteAdjustment>(&p.adjustment))
      adj = "=" + std::to_string(abs->goal);
    else if (const auto* rel = std::get_if<RelativeAdjustment>(&p.adjustment))
      adj = (rel->percentage > 0 ? "+" : "") + std::to_string(rel->percentage) + "%";
    else {
      int st = std::get<StepAdjustment>(p.adjustment).step;
      adj = (st > 0 ? "+" : "") + std::to_string(st);
    }
    os << "    adj" << i << " [shape=triangle, label=" << label(adj) << "];\n";

    for (const auto& c : p.constraints) emitConstraint(c, "    ");
    os << "  }\n";
  }

  for (size_t i = 0; i < model.policies.size(); ++i) {
    const auto& p = model.policies[i];
    for (size_t j = 0; j < model.target_groups.size(); ++j) {
      if (model.target_groups[j].name == p.target) {
        os << "  p" << i << " -> t" << j << ";\n";
        break;
      }
    }
  }

  os << "}\n";
  return os.str();
}

}  // namespace spdsim::spd
