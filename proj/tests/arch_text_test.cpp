#include "doctest.h"
#include "spdsim/arch/parse.hpp"

using namespace spdsim;
using namespace spdsim::arch;

namespace {

const char* kValid = R"(
architecture "shop" {
  component "Front" {
    operation "browse" {
      demand cpu exp(20)
      branch {
        30% { call "Back.lookup" }
        70% { demand cpu 5 }
      }
    }
    operation "order" {
      demand cpu uniform(10, 30)
      send "orders"
    }
  }
  component "Back" {
    operation "lookup" { demand cpu exp(8) }
    operation "settle" { demand cpu exp(12) }
  }

  container "app" rate 1000 scheduling processor-sharing
  container "db" rate 500 scheduling fcfs
  queue "orders"

  assembly "front" component "Front"
  assembly "back" component "Back"
  assembly "settler" component "Back" consumes "orders" with "settle"

  allocate "front" on "app"
  allocate "back" on "db"
  allocate "settler" on "db"

  connect "front" calls "Back" via "back"

  usage {
    population 8
    think exp(5)
    scenario {
      60% call "front.browse"
      40% call "front.order"
    }
  }
}
)";

ArchitectureModel loadOk(const std::string& text) {
  auto result = loadArchitecture(text, "test.arch");
  if (!result.ok()) {
    for (const auto& d : result.diagnostics) {
      INFO(d.code << ": " << d.message);
      CHECK(false);
    }
  }
  REQUIRE(result.ok());
  return *result.model;
}

bool hasCode(const std::vector<Diagnostic>& ds, const std::string& code) {
  for (const auto& d : ds)
    if (d.code == code) return true;
  return false;
}

std::vector<Diagnostic> diagnose(const std::string& text) {
  return loadArchitecture(text, "test.arch").diagnostics;
}

}  // namespace

TEST_CASE("well-formed architecture parses completely") {
  ArchitectureModel m = loadOk(kValid);
  CHECK(m.name == "shop");
  CHECK(m.components.size() == 2);
  CHECK(m.containers.size() == 2);
  CHECK(m.assemblies.size() == 3);
  CHECK(m.usage.population == 8);
  REQUIRE(m.usage.scenario.size() == 2);
  CHECK(m.usage.scenario[0].probability == doctest::Approx(0.6));

  const Component* front = m.findComponent("Front");
  REQUIRE(front != nullptr);
  const ProvidedOperation* browse = front->findOperation("browse");
  REQUIRE(browse != nullptr);
  REQUIRE(browse->behavior.size() == 2);
  CHECK(std::holds_alternative<InternalAction>(browse->behavior[0].v));
  auto& br = std::get<Branch>(browse->behavior[1].v);
  REQUIRE(br.arms.size() == 2);
  CHECK(std::holds_alternative<ExternalCall>(br.arms[0].actions[0].v));

  CHECK(m.findContainer("db")->scheduling == Scheduling::FirstComeFirstServed);
  CHECK(m.findAssembly("settler")->consumes_queue == "orders");
  CHECK(m.findAssembly("settler")->consume_operation == "settle");
}

TEST_CASE("call targets resolve through connectors or sole instantiation") {
  ArchitectureModel m = loadOk(kValid);
  // connector wins even though two assemblies instantiate Back
  auto r = resolveCall(m, "front", "Back");
  CHECK(r.status == CallResolution::Ok);
  CHECK(r.assembly->name == "back");
  // without a connector the call is ambiguous
  auto r2 = resolveCall(m, "settler", "Back");
  CHECK(r2.status == CallResolution::Ambiguous);
  auto r3 = resolveCall(m, "front", "Missing");
  CHECK(r3.status == CallResolution::Unknown);
}

TEST_CASE("duplicate names are rejected") {
  CHECK(hasCode(diagnose(R"(
architecture "a" {
  container "x" rate 100 scheduling fcfs
  container "x" rate 100 scheduling fcfs
  usage { population 1 think 1 scenario { } }
}
)"),
                "DUPLICATE_NAME"));
}

TEST_CASE("branch probabilities must sum to one") {
  CHECK(hasCode(diagnose(R"(
architecture "a" {
  component "C" {
    operation "o" {
      branch {
        30% { demand cpu 1 }
        30% { demand cpu 2 }
      }
    }
  }
  container "x" rate 100 scheduling fcfs
  assembly "c" component "C"
  allocate "c" on "x"
  usage { population 1 think 1 scenario { 100% call "c.o" } }
}
)"),
                "PROB_SUM"));
}

TEST_CASE("unallocated assemblies and unresolved references are reported") {
  auto ds = diagnose(R"(
architecture "a" {
  component "C" { operation "o" { call "Nowhere.op" } }
  container "x" rate 100 scheduling fcfs
  assembly "c" component "C"
  usage { population 1 think 1 scenario { 100% call "c.o" } }
}
)");
  CHECK(hasCode(ds, "UNALLOCATED"));
  CHECK(hasCode(ds, "UNRESOLVED_COMPONENT"));
}

TEST_CASE("synchronous call cycles are rejected") {
  CHECK(hasCode(diagnose(R"(
architecture "a" {
  component "C" { operation "o" { call "D.p" } }
  component "D" { operation "p" { call "C.o" } }
  container "x" rate 100 scheduling fcfs
  assembly "c" component "C"
  assembly "d" component "D"
  allocate "c" on "x"
  allocate "d" on "x"
  usage { population 1 think 1 scenario { 100% call "c.o" } }
}
)"),
                "CALL_CYCLE"));
}

TEST_CASE("nonpositive rates and bad expressions are rejected") {
  CHECK(hasCode(diagnose(R"(
architecture "a" {
  container "x" rate 0 scheduling fcfs
  usage { population 1 think 1 scenario { } }
}
)"),
                "NONPOSITIVE_RATE"));
  CHECK(hasCode(diagnose(R"(
architecture "a" {
  component "C" { operation "o" { demand cpu uniform(5, 2) } }
  container "x" rate 10 scheduling fcfs
  assembly "c" component "C"
  allocate "c" on "x"
  usage { population 1 think 1 scenario { 100% call "c.o" } }
}
)"),
                "BAD_EXPRESSION"));
}

TEST_CASE("queue consumption requires an unambiguous handler") {
  auto ds = diagnose(R"(
architecture "a" {
  component "C" {
    operation "o1" { demand cpu 1 }
    operation "o2" { demand cpu 1 }
  }
  container "x" rate 10 scheduling fcfs
  queue "q"
  assembly "c" component "C" consumes "q"
  allocate "c" on "x"
  usage { population 1 think 1 scenario { } }
}
)");
  CHECK(hasCode(ds, "AMBIGUOUS_HANDLER"));
}

TEST_CASE("mean of stochastic expressions") {
  CHECK(meanOf(ConstantExpr{4}) == 4.0);
  CHECK(meanOf(ExponentialExpr{7}) == 7.0);
  CHECK(meanOf(UniformExpr{2, 6}) == 4.0);
}
