#include "spdsim/spd/parse.hpp"

#include <cmath>
#include <set>

#include "text/lexer.hpp"
#include "text/parser_base.hpp"

namespace spdsim::spd {
namespace {

using text::NumberUnit;
using text::Token;
using text::TokenKind;

constexpr double kDefaultWindowSeconds = 60.0;
constexpr double kDefaultPairCooldownSeconds = 180.0;

bool isWindowedKind(StimulusKind k) {
  return k == StimulusKind::CpuUtilization || k == StimulusKind::QueueLength ||
         k == StimulusKind::OperationResponseTime;
}

class SpdParser : text::ParserBase {
 public:
  SpdParser(const std::vector<Token>& toks, std::vector<Diagnostic>& diags)
      : ParserBase(toks, diags), diags_(diags) {}

  std::optional<SpdModel> parseFile() {
    if (atEnd()) {
      error("EMPTY_SPD", "input contains no policy definition");
      return std::nullopt;
    }
    SpdModel model;
    model.span = peek().span;
    if (!expectWord("spd")) return std::nullopt;
    if (!expectString(model.name)) return std::nullopt;
    if (!expectPunct("{")) return std::nullopt;

    while (!atEnd() && !atPunct("}")) {
      if (atWord("target")) {
        parseTarget(model);
      } else if (atWord("policy")) {
        parsePolicy(model);
      } else if (atWord("policy-pair")) {
        parsePolicyPair(model);
      } else {
        error("EXPECTED_TOKEN",
              "expected 'target', 'policy' or 'policy-pair', found " + describe(peek()));
        advance();
      }
    }
    expectPunct("}");
    if (!atEnd())
      error("EXPECTED_TOKEN", "trailing input after the closing '}'");

    resolveReferences(model);
    if (hasErrors(diags_)) return std::nullopt;
    return model;
  }

 private:
  void parseTarget(SpdModel& model) {
    TargetGroup tg;
    tg.span = peek().span;
    advance();  // target

    enum class Kind { Ei, Sg, Ccg } kind;
    if (acceptWord("elastic-infrastructure")) {
      kind = Kind::Ei;
      tg.kind = ElasticInfrastructure{};
    } else if (acceptWord("service-group")) {
      kind = Kind::Sg;
      tg.kind = ServiceGroup{};
    } else if (acceptWord("competing-consumers-group")) {
      kind = Kind::Ccg;
      tg.kind = CompetingConsumersGroup{};
    } else {
      error("EXPECTED_TOKEN",
            "expected a target kind (elastic-infrastructure, service-group, "
            "competing-consumers-group), found " + describe(peek()));
      return;
    }
    if (!expectString(tg.name)) return;
    if (!expectPunct("{")) return;

    bool have_unit = false, have_hosting = false, have_queue = false;
    while (!atEnd() && !atPunct("}")) {
      if (acceptWord("unit")) {
        const char* unit_word = kind == Kind::Ei       ? "container"
                                : kind == Kind::Sg     ? "assembly"
                                                       : "consumer";
        if (!expectWord(unit_word)) {
          skipBlockRemainder();
          model.target_groups.push_back(std::move(tg));
          return;
        }
        std::string ref;
        if (!expectString(ref)) continue;
        have_unit = true;
        if (kind == Kind::Ei)
          std::get<ElasticInfrastructure>(tg.kind).unit_container = ref;
        else if (kind == Kind::Sg)
          std::get<ServiceGroup>(tg.kind).unit_assembly = ref;
        else
          std::get<CompetingConsumersGroup>(tg.kind).unit_consumer = ref;
      } else if (kind == Kind::Sg && acceptWord("load-balancer")) {
        std::string ref;
        if (expectString(ref))
          std::get<ServiceGroup>(tg.kind).load_balancer = ref;
      } else if (kind == Kind::Ccg && acceptWord("queue")) {
        std::string ref;
        if (expectString(ref)) {
          std::get<CompetingConsumersGroup>(tg.kind).queue = ref;
          have_queue = true;
        }
      } else if (kind != Kind::Ei && acceptWord("hosting")) {
        std::string ref;
        if (expectString(ref)) {
          have_hosting = true;
          if (kind == Kind::Sg)
            std::get<ServiceGroup>(tg.kind).hosting_infrastructure = ref;
          else
            std::get<CompetingConsumersGroup>(tg.kind).hosting_infrastructure = ref;
        }
      } else if (atWord("constraint")) {
        Constraint c;
        if (parseConstraint(c, ConstraintScope::Target))
          tg.constraints.push_back(std::move(c));
      } else {
        error("EXPECTED_TOKEN",
              "unexpected " + describe(peek()) + " in target body");
        advance();
      }
    }
    expectPunct("}");

    if (!have_unit)
      error("MISSING_FIELD", "target \"" + tg.name + "\" declares no unit", tg.span);
    if (kind != Kind::Ei && !have_hosting)
      error("MISSING_FIELD",
            "target \"" + tg.name + "\" declares no hosting infrastructure", tg.span);
    if (kind == Kind::Ccg && !have_queue)
      error("MISSING_FIELD", "target \"" + tg.name + "\" declares no queue", tg.span);
    model.target_groups.push_back(std::move(tg));
  }

  void parsePolicy(SpdModel& model) {
    ScalingPolicy p;
    p.span = peek().span;
    advance();  // policy
    if (!expectString(p.name)) return;
    if (acceptWord("inactive"))
      p.active = false;
    else
      acceptWord("active");
    if (!expectPunct("{")) return;

    bool have_target = false, have_trigger = false, have_adjust = false;
    while (!atEnd() && !atPunct("}")) {
      if (acceptWord("target")) {
        have_target = expectString(p.target);
      } else if (atWord("trigger")) {
        have_trigger = parseTrigger(p.trigger);
        if (!have_trigger) {
          skipBlockRemainder();
          model.policies.push_back(std::move(p));
          return;
        }
      } else if (atWord("adjust")) {
        p.adjustment_span = peek().span;
        have_adjust = parseAdjust(p.adjustment);
      } else if (atWord("constraint")) {
        Constraint c;
        if (parseConstraint(c, ConstraintScope::Policy))
          p.constraints.push_back(std::move(c));
      } else {
        error("EXPECTED_TOKEN",
              "unexpected " + describe(peek()) + " in policy body");
        advance();
      }
    }
    expectPunct("}");

    if (!have_target)
      error("MISSING_FIELD", "policy \"" + p.name + "\" names no target", p.span);
    if (!have_trigger)
      error("MISSING_FIELD", "policy \"" + p.name + "\" has no trigger", p.span);
    if (!have_adjust)
      error("MISSING_FIELD", "policy \"" + p.name + "\" has no adjustment", p.span);
    model.policies.push_back(std::move(p));
  }

  bool parseStimulus(Stimulus& s) {
    s.span = peek().span;
    if (acceptWord("cpu-utilization"))
      s.kind = StimulusKind::CpuUtilization;
    else if (acceptWord("queue-length"))
      s.kind = StimulusKind::QueueLength;
    else if (acceptWord("response-time"))
      s.kind = StimulusKind::OperationResponseTime;
    else if (acceptWord("element-count"))
      s.kind = StimulusKind::NumberOfElements;
    else if (acceptWord("simulation-time"))
      s.kind = StimulusKind::SimulationTime;
    else {
      error("EXPECTED_TOKEN", "expected a stimulus kind, found " + describe(peek()));
      return false;
    }

    if (acceptWord("window")) {
      double w = 0;
      if (!parseDurationSeconds(w)) return false;
      s.window_s = w;
    } else if (isWindowedKind(s.kind)) {
      s.window_s = kDefaultWindowSeconds;
    }

    if (acceptWord("avg")) {
      s.aggregation = Aggregation::Average;
    } else if (peek().kind == TokenKind::Word && peek().text.size() > 1 &&
               peek().text[0] == 'p' &&
               peek().text.find_first_not_of("0123456789", 1) == std::string::npos) {
      s.aggregation = Aggregation::Percentile;
      s.percentile = std::stod(peek().text.substr(1));
      advance();
    }
    return true;
  }

  bool parseTrigger(ScalingTrigger& t) {
    t.span = peek().span;
    advance();  // trigger
    if (acceptWord("fire-on-value")) {
      if (!parseStimulus(t.stimulus)) return false;
      FireOnValue fv;
      if (acceptPunct(">"))
        fv.op = RelationalOperator::GreaterThan;
      else if (acceptPunct(">="))
        fv.op = RelationalOperator::GreaterThanOrEqual;
      else if (acceptPunct("<"))
        fv.op = RelationalOperator::LessThan;
      else if (acceptPunct("<="))
        fv.op = RelationalOperator::LessThanOrEqual;
      else if (acceptPunct("="))
        fv.op = RelationalOperator::EqualTo;
      else {
        error("EXPECTED_TOKEN",
              "expected a comparison (>, >=, <, <=, =), found " + describe(peek()));
        return false;
      }
      if (!parseExpected(fv.expected)) return false;
      t.behavior = fv;
      return true;
    }
    if (acceptWord("fire-on-trend")) {
      if (!parseStimulus(t.stimulus)) return false;
      FireOnTrend ft;
      if (acceptWord("increasing"))
        ft.trend = TrendPattern::Increasing;
      else if (acceptWord("decreasing"))
        ft.trend = TrendPattern::Decreasing;
      else {
        error("EXPECTED_TOKEN",
              "expected 'increasing' or 'decreasing', found " + describe(peek()));
        return false;
      }
      if (acceptWord("over")) {
        Token n;
        if (!expectNumber(n)) return false;
        if (!n.integral || n.unit != NumberUnit::None) {
          error("BAD_TREND", "trend window count must be a bare integer", n.span);
          return false;
        }
        ft.window_count = static_cast<int>(n.number);
      }
      t.behavior = ft;
      return true;
    }
    error("EXPECTED_TOKEN",
          "expected 'fire-on-value' or 'fire-on-trend', found " + describe(peek()));
    return false;
  }

  bool parseExpected(ExpectedValue& out) {
    Token n;
    if (!expectNumber(n)) return false;
    switch (n.unit) {
      case NumberUnit::Percent:
        out = ExpectedPercentage{n.number};
        return true;
      case NumberUnit::Seconds:
      case NumberUnit::Milliseconds:
      case NumberUnit::Minutes:
        out = ExpectedTime{text::toSeconds(n)};
        return true;
      case NumberUnit::None:
        if (!n.integral) {
          error("BAD_EXPECTED", "count thresholds must be integers", n.span);
          return false;
        }
        out = ExpectedCount{static_cast<long>(n.number)};
        return true;
    }
    return false;
  }

  bool parseAdjust(AdjustmentType& out) {
    advance();  // adjust
    Token n;
    if (acceptWord("absolute")) {
      if (!expectNumber(n)) return false;
      out = AbsoluteAdjustment{static_cast<int>(n.number)};
      return true;
    }
    if (acceptWord("relative")) {
      if (!expectNumber(n)) return false;
      if (n.unit != NumberUnit::Percent) {
        error("EXPECTED_TOKEN", "relative adjustments take a percentage", n.span);
        return false;
      }
      RelativeAdjustment rel{static_cast<int>(n.number), 0};
      if (!expectWord("min")) return false;
      if (!expectNumber(n)) return false;
      rel.min_adjustment = static_cast<int>(n.number);
      out = rel;
      return true;
    }
    if (acceptWord("step")) {
      if (!expectNumber(n)) return false;
      out = StepAdjustment{static_cast<int>(n.number)};
      return true;
    }
    error("EXPECTED_TOKEN",
          "expected 'absolute', 'relative' or 'step', found " + describe(peek()));
    return false;
  }

  bool parseConstraint(Constraint& c, ConstraintScope scope) {
    c.span = peek().span;
    c.scope = scope;
    advance();  // constraint
    if (acceptWord("cooldown")) {
      double d = 0;
      if (!parseDurationSeconds(d)) return false;
      c.rule = CooldownConstraint{d};
      return true;
    }
    if (acceptWord("interval")) {
      IntervalConstraint iv;
      if (!expectWord("from")) return false;
      if (!parseDurationSeconds(iv.active_from_s)) return false;
      if (!expectWord("until")) return false;
      if (!parseDurationSeconds(iv.active_until_s)) return false;
      c.rule = iv;
      return true;
    }
    if (acceptWord("size")) {
      SizeConstraint sz;
      Token n;
      if (!expectWord("min")) return false;
      if (!expectNumber(n)) return false;
      sz.min_elements = static_cast<int>(n.number);
      if (!expectWord("max")) return false;
      if (!expectNumber(n)) return false;
      sz.max_elements = static_cast<int>(n.number);
      c.rule = sz;
      return true;
    }
    error("EXPECTED_TOKEN",
          "expected 'cooldown', 'interval' or 'size', found " + describe(peek()));
    return false;
  }

  bool parseDurationSeconds(double& out, SourceSpan* span = nullptr) {
    Token n;
    if (!expectNumber(n)) return false;
    if (span) *span = n.span;
    if (n.unit != NumberUnit::Seconds && n.unit != NumberUnit::Milliseconds &&
        n.unit != NumberUnit::Minutes) {
      error("BAD_DURATION", "durations need a unit suffix (s, ms or min)", n.span);
      return false;
    }
    out = text::toSeconds(n);
    return true;
  }

  void parsePolicyPair(SpdModel& model) {
    SourceSpan pair_span = peek().span;
    advance();  // policy-pair
    std::string name;
    if (!expectString(name)) return;
    if (!expectWord("target-tracking")) return;
    Stimulus stim;
    if (!parseStimulus(stim)) return;
    Token value;
    if (!expectNumber(value)) return;
    if (!expectWord("tolerance")) return;
    Token tol;
    if (!expectNumber(tol)) return;
    if (tol.unit != NumberUnit::Percent) {
      error("EXPECTED_TOKEN", "tolerance takes a percentage", tol.span);
      return;
    }
    if (!expectPunct("{")) return;

    std::string target;
    bool have_target = false;
    std::vector<Constraint> constraints;
    while (!atEnd() && !atPunct("}")) {
      if (acceptWord("target")) {
        have_target = expectString(target);
      } else if (atWord("constraint")) {
        Constraint c;
        if (parseConstraint(c, ConstraintScope::Policy))
          constraints.push_back(std::move(c));
      } else {
        error("EXPECTED_TOKEN",
              "unexpected " + describe(peek()) + " in policy-pair body");
        advance();
      }
    }
    expectPunct("}");
    if (!have_target) {
      error("MISSING_FIELD", "policy-pair \"" + name + "\" names no target", pair_span);
      return;
    }

    bool has_cooldown = false;
    for (const auto& c : constraints)
      if (std::holds_alternative<CooldownConstraint>(c.rule)) has_cooldown = true;
    if (!has_cooldown)
      constraints.push_back(
          {CooldownConstraint{kDefaultPairCooldownSeconds}, ConstraintScope::Policy, pair_span});

    ExpectedValue high, low;
    const double t = tol.number;
    if (value.unit == NumberUnit::Percent) {
      high = ExpectedPercentage{value.number * (100.0 + t) / 100.0};
      low = ExpectedPercentage{value.number * (100.0 - t) / 100.0};
    } else if (value.unit == NumberUnit::None) {
      if (!value.integral) {
        error("BAD_EXPECTED", "count targets must be integers", value.span);
        return;
      }
      high = ExpectedCount{
          static_cast<long>(std::ceil(value.number * (100.0 + t) / 100.0 - 1e-9))};
      low = ExpectedCount{
          static_cast<long>(std::floor(value.number * (100.0 - t) / 100.0 + 1e-9))};
    } else {
      const double seconds = text::toSeconds(value);
      high = ExpectedTime{seconds * (100.0 + t) / 100.0};
      low = ExpectedTime{seconds * (100.0 - t) / 100.0};
    }

    ScalingPolicy up;
    up.name = name + "-out";
    up.target = target;
    up.trigger.stimulus = stim;
    up.trigger.behavior = FireOnValue{RelationalOperator::GreaterThan, high};
    up.trigger.span = pair_span;
    up.adjustment = StepAdjustment{1};
    up.constraints = constraints;
    up.span = pair_span;

    ScalingPolicy down = up;
    down.name = name + "-in";
    down.trigger.behavior = FireOnValue{RelationalOperator::LessThan, low};
    down.adjustment = StepAdjustment{-1};

    model.policies.push_back(std::move(up));
    model.policies.push_back(std::move(down));
  }

  void resolveReferences(SpdModel& model) {
    std::set<std::string> target_names, policy_names;
    for (const auto& tg : model.target_groups) {
      if (!target_names.insert(tg.name).second)
        error("DUPLICATE_NAME", "target group \"" + tg.name + "\" is declared twice", tg.span);
      const std::string* hosting = nullptr;
      if (const auto* sg = std::get_if<ServiceGroup>(&tg.kind))
        hosting = &sg->hosting_infrastructure;
      else if (const auto* ccg = std::get_if<CompetingConsumersGroup>(&tg.kind))
        hosting = &ccg->hosting_infrastructure;
      if (hosting && !hosting->empty()) {
        const TargetGroup* h = model.findTargetGroup(*hosting);
        if (!h || !h->isInfrastructure())
          error("UNRESOLVED_HOSTING",
                "hosting infrastructure \"" + *hosting + "\" is not an "
                "elastic-infrastructure target in this definition", tg.span);
      }
    }

    if (model.policies.empty())
      error("EMPTY_SPD", "policy definition declares no policies", model.span);

    int infra = 0, service = 0;
    for (const auto& p : model.policies) {
      if (!policy_names.insert(p.name).second)
        error("DUPLICATE_NAME", "policy \"" + p.name + "\" is declared twice", p.span);
      const TargetGroup* tg = model.findTargetGroup(p.target);
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
            "must scale one level only", model.span);
  }

  std::vector<Diagnostic>& diags_;
};

}  // namespace

ParseResult parseSpd(std::string_view source, const std::string& file) {
  ParseResult result;
  auto tokens = text::lex(source, file, result.diagnostics);
  if (hasErrors(result.diagnostics)) return result;
  SpdParser parser(tokens, result.diagnostics);
  result.model = parser.parseFile();
  if (hasErrors(result.diagnostics)) result.model.reset();
  return result;
}

}  // namespace spdsim::spd
