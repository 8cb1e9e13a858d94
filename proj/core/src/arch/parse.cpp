#include "spdsim/arch/parse.hpp"

#include "spdsim/arch/validate.hpp"
#include "text/lexer.hpp"
#include "text/parser_base.hpp"

namespace spdsim::arch {
namespace {

using text::NumberUnit;
using text::Token;
using text::TokenKind;

class ArchParser : text::ParserBase {
 public:
  ArchParser(const std::vector<Token>& toks, std::vector<Diagnostic>& diags)
      : ParserBase(toks, diags) {}

  std::optional<ArchitectureModel> parseFile() {
    if (atEnd()) {
      error("EMPTY_ARCHITECTURE", "input contains no architecture");
      return std::nullopt;
    }
    ArchitectureModel m;
    m.span = peek().span;
    if (!expectWord("architecture")) return std::nullopt;
    if (!expectString(m.name)) return std::nullopt;
    if (!expectPunct("{")) return std::nullopt;

    bool have_usage = false;
    while (!atEnd() && !atPunct("}")) {
      if (atWord("component")) {
        parseComponent(m);
      } else if (atWord("container")) {
        parseContainer(m);
      } else if (atWord("queue")) {
        parseQueue(m);
      } else if (atWord("assembly")) {
        parseAssembly(m);
      } else if (atWord("connect")) {
        parseConnector(m);
      } else if (atWord("allocate")) {
        parseAllocation(m);
      } else if (atWord("usage")) {
        have_usage = true;
        parseUsage(m);
      } else {
        error("EXPECTED_TOKEN", "unexpected " + describe(peek()) +
                                    " at architecture level");
        advance();
      }
    }
    expectPunct("}");
    if (!have_usage)
      error("MISSING_FIELD", "architecture declares no usage model", m.span);
    return m;
  }

 private:
  void parseComponent(ArchitectureModel& m) {
    Component c;
    c.span = peek().span;
    advance();  // component
    if (!expectString(c.name)) return;
    if (!expectPunct("{")) return;
    while (!atEnd() && !atPunct("}")) {
      if (atWord("operation")) {
        ProvidedOperation op;
        op.span = peek().span;
        advance();
        if (!expectString(op.name)) break;
        if (!expectPunct("{")) break;
        parseActions(op.behavior);
        expectPunct("}");
        c.operations.push_back(std::move(op));
      } else {
        error("EXPECTED_TOKEN", "unexpected " + describe(peek()) + " in component body");
        advance();
      }
    }
    expectPunct("}");
    m.components.push_back(std::move(c));
  }

  // Parses the body of an action block up to (not including) the closing '}'.
  void parseActions(std::vector<Action>& out) {
    while (!atEnd() && !atPunct("}")) {
      Action a;
      a.span = peek().span;
      if (acceptWord("demand")) {
        if (!expectWord("cpu")) return;
        InternalAction ia;
        if (!parseExpression(ia.demand)) return;
        a.v = std::move(ia);
      } else if (acceptWord("call")) {
        std::string target;
        SourceSpan span;
        if (!expectString(target, &span)) return;
        auto dot = target.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == target.size()) {
          error("BAD_CALL", "call targets are written \"Component.operation\"", span);
          return;
        }
        a.v = ExternalCall{target.substr(0, dot), target.substr(dot + 1)};
      } else if (acceptWord("send")) {
        std::string queue;
        if (!expectString(queue)) return;
        a.v = AsyncSend{std::move(queue)};
      } else if (acceptWord("branch")) {
        if (!expectPunct("{")) return;
        Branch br;
        while (!atEnd() && !atPunct("}")) {
          Branch::Arm arm;
          Token prob;
          if (!expectNumber(prob)) return;
          arm.probability =
              prob.unit == NumberUnit::Percent ? prob.number / 100.0 : prob.number;
          if (!expectPunct("{")) return;
          parseActions(arm.actions);
          if (!expectPunct("}")) return;
          br.arms.push_back(std::move(arm));
        }
        if (!expectPunct("}")) return;
        a.v = std::move(br);
      } else {
        error("EXPECTED_TOKEN",
              "expected 'demand', 'call', 'send' or 'branch', found " + describe(peek()));
        advance();
        continue;
      }
      out.push_back(std::move(a));
    }
  }

  bool parseExpression(StochasticExpression& out) {
    if (peek().kind == TokenKind::Number) {
      Token n;
      expectNumber(n);
      out = ConstantExpr{n.number};
      return true;
    }
    if (acceptWord("const")) {
      Token n;
      if (!expectPunct("(") || !expectNumber(n) || !expectPunct(")")) return false;
      out = ConstantExpr{n.number};
      return true;
    }
    if (acceptWord("exp")) {
      Token n;
      if (!expectPunct("(") || !expectNumber(n) || !expectPunct(")")) return false;
      out = ExponentialExpr{n.number};
      return true;
    }
    if (acceptWord("uniform")) {
      Token lo, hi;
      if (!expectPunct("(") || !expectNumber(lo) || !expectPunct(",") ||
          !expectNumber(hi) || !expectPunct(")"))
        return false;
      out = UniformExpr{lo.number, hi.number};
      return true;
    }
    error("EXPECTED_TOKEN",
          "expected a number, const(...), exp(...) or uniform(...), found " +
              describe(peek()));
    return false;
  }

  void parseContainer(ArchitectureModel& m) {
    ResourceContainer rc;
    rc.span = peek().span;
    advance();  // container
    if (!expectString(rc.name)) return;
    if (!expectWord("rate")) return;
    Token n;
    if (!expectNumber(n)) return;
    rc.rate_wu_per_s = n.number;
    if (!expectWord("scheduling")) return;
    if (acceptWord("processor-sharing"))
      rc.scheduling = Scheduling::ProcessorSharing;
    else if (acceptWord("fcfs"))
      rc.scheduling = Scheduling::FirstComeFirstServed;
    else {
      error("EXPECTED_TOKEN",
            "expected 'processor-sharing' or 'fcfs', found " + describe(peek()));
      return;
    }
    m.containers.push_back(std::move(rc));
  }

  void parseQueue(ArchitectureModel& m) {
    BrokerQueue q;
    q.span = peek().span;
    advance();  // queue
    if (!expectString(q.name)) return;
    m.queues.push_back(std::move(q));
  }

  void parseAssembly(ArchitectureModel& m) {
    Assembly a;
    a.span = peek().span;
    advance();  // assembly
    if (!expectString(a.name)) return;
    if (!expectWord("component")) return;
    if (!expectString(a.component)) return;
    if (acceptWord("consumes")) {
      std::string q;
      if (!expectString(q)) return;
      a.consumes_queue = q;
      if (acceptWord("with")) {
        std::string op;
        if (!expectString(op)) return;
        a.consume_operation = op;
      }
    }
    m.assemblies.push_back(std::move(a));
  }

  void parseConnector(ArchitectureModel& m) {
    Connector c;
    c.span = peek().span;
    advance();  // connect
    if (!expectString(c.from_assembly)) return;
    if (!expectWord("calls")) return;
    if (!expectString(c.to_component)) return;
    if (!expectWord("via")) return;
    if (!expectString(c.to_assembly)) return;
    m.connectors.push_back(std::move(c));
  }

  void parseAllocation(ArchitectureModel& m) {
    Allocation al;
    al.span = peek().span;
    advance();  // allocate
    if (!expectString(al.assembly)) return;
    if (!expectWord("on")) return;
    if (!expectString(al.container)) return;
    m.allocations.push_back(std::move(al));
  }

  void parseUsage(ArchitectureModel& m) {
    UsageModel& u = m.usage;
    u.span = peek().span;
    advance();  // usage
    if (!expectPunct("{")) return;
    while (!atEnd() && !atPunct("}")) {
      if (acceptWord("population")) {
        Token n;
        if (!expectNumber(n)) return;
        u.population = static_cast<int>(n.number);
      } else if (acceptWord("think")) {
        if (!parseExpression(u.think_time)) return;
      } else if (acceptWord("scenario")) {
        if (!expectPunct("{")) return;
        while (!atEnd() && !atPunct("}")) {
          ScenarioCall sc;
          Token prob;
          if (!expectNumber(prob)) return;
          sc.span = prob.span;
          sc.probability =
              prob.unit == NumberUnit::Percent ? prob.number / 100.0 : prob.number;
          if (!expectWord("call")) return;
          std::string target;
          SourceSpan span;
          if (!expectString(target, &span)) return;
          auto dot = target.find('.');
          if (dot == std::string::npos || dot == 0 || dot + 1 == target.size()) {
            error("BAD_CALL", "scenario calls are written \"assembly.operation\"", span);
            return;
          }
          sc.assembly = target.substr(0, dot);
          sc.operation = target.substr(dot + 1);
          u.scenario.push_back(std::move(sc));
        }
        if (!expectPunct("}")) return;
      } else {
        error("EXPECTED_TOKEN",
              "expected 'population', 'think' or 'scenario', found " + describe(peek()));
        advance();
      }
    }
    expectPunct("}");
  }
};

}  // namespace

LoadResult loadArchitecture(std::string_view source, const std::string& file) {
  LoadResult result;
  auto tokens = text::lex(source, file, result.diagnostics);
  if (hasErrors(result.diagnostics)) return result;
  ArchParser parser(tokens, result.diagnostics);
  result.model = parser.parseFile();
  if (result.model) {
    auto semantic = validateArchitecture(*result.model);
    result.diagnostics.insert(result.diagnostics.end(), semantic.begin(),
                              semantic.end());
  }
  if (hasErrors(result.diagnostics)) result.model.reset();
  return result;
}

}  // namespace spdsim::arch
