#include "spdsim/runtime/transform.hpp"

#include <algorithm>
#include <set>

#include "spdsim/diagnostics.hpp"

namespace spdsim::runtime {
namespace {

[[noreturn]] void configError(const std::string& msg) { throw Error("CONFIG_ERROR", msg); }
[[noreturn]] void transformError(const std::string& msg) {
  throw Error("TRANSFORM_ERROR", msg);
}

ContainerInstance cloneContainer(RuntimeConfiguration& cfg, const std::string& spec) {
  const arch::ResourceContainer* decl = cfg.architecture->findContainer(spec);
  if (!decl) configError("unknown container \"" + spec + "\"");
  ContainerInstance c;
  c.id = cfg.next_container_id++;
  c.spec = spec;
  c.rate_wu_per_s = decl->rate_wu_per_s;
  c.scheduling = decl->scheduling;
  c.birth_order = cfg.next_container_birth++;
  return c;
}

ReplicaInstance makeReplica(RuntimeConfiguration& cfg, const std::string& assembly,
                            int container_id) {
  ReplicaInstance r;
  r.id = cfg.next_replica_id++;
  r.assembly = assembly;
  r.container_id = container_id;
  r.birth_order = cfg.next_replica_birth++;
  return r;
}

std::vector<ReplicaInstance>* replicaVectorOf(TargetGroupCfg& g) {
  if (auto* sg = std::get_if<ServiceGroupCfg>(&g.kind)) return &sg->replicas;
  if (auto* cc = std::get_if<CompetingConsumersCfg>(&g.kind)) return &cc->replicas;
  return nullptr;
}

const std::string* unitAssemblyOf(const TargetGroupCfg& g) {
  if (const auto* sg = std::get_if<ServiceGroupCfg>(&g.kind)) return &sg->unit_assembly;
  if (const auto* cc = std::get_if<CompetingConsumersCfg>(&g.kind))
    return &cc->unit_assembly;
  return nullptr;
}

const std::string* hostingOf(const TargetGroupCfg& g) {
  if (const auto* sg = std::get_if<ServiceGroupCfg>(&g.kind)) return &sg->hosting;
  if (const auto* cc = std::get_if<CompetingConsumersCfg>(&g.kind)) return &cc->hosting;
  return nullptr;
}

EnactmentOutcome makeOutcome(const EnactmentContext& ctx, int requested, int achieved) {
  if (ctx.clamped) return Clamped{ctx.raw_size, achieved};
  if (achieved != requested) return Clamped{requested, achieved};
  return Applied{};
}

void appendRecord(TargetGroupCfg& g, const EnactmentContext& ctx, int before, int achieved,
                  int requested) {
  g.history.push_back(
      {ctx.time_s, ctx.policy, before, achieved, makeOutcome(ctx, requested, achieved)});
}

struct ScaleArgs {
  TargetGroupCfg* group = nullptr;
  int current = 0;
};

ScaleArgs checkScale(RuntimeConfiguration& cfg, const std::string& group, int target_size,
                     bool out, bool infrastructure) {
  TargetGroupCfg* g = cfg.findGroup(group);
  if (!g) transformError("unknown target group \"" + group + "\"");
  if (g->isInfrastructure() != infrastructure)
    transformError("operation does not match the kind of \"" + group + "\"");
  if (target_size < 1) transformError("target size must be at least 1");
  int cur = g->size();
  if (out ? target_size <= cur : target_size >= cur)
    transformError("target size " + std::to_string(target_size) +
                   " does not scale \"" + group + "\" " + (out ? "out" : "in") +
                   " from " + std::to_string(cur));
  return {g, cur};
}

// A container can be released when it is not the original, hosts nothing
// rigid, and no group would lose its last replica with it.
bool releasableAfterScaleIn(const RuntimeConfiguration& cfg, const ContainerInstance& c) {
  if (c.birth_order == 0) return false;
  for (const auto& r : cfg.rigid_replicas)
    if (r.container_id == c.id) return false;
  for (const auto& g : cfg.groups) {
    const std::vector<ReplicaInstance>* rs = nullptr;
    if (const auto* sg = std::get_if<ServiceGroupCfg>(&g.kind)) rs = &sg->replicas;
    else if (const auto* cc = std::get_if<CompetingConsumersCfg>(&g.kind)) rs = &cc->replicas;
    if (!rs) continue;
    std::size_t on_c = 0;
    for (const auto& r : *rs)
      if (r.container_id == c.id) ++on_c;
    if (on_c > 0 && on_c == rs->size()) return false;
  }
  return true;
}

}  // namespace

RuntimeConfiguration identifyInitialConfiguration(const arch::ArchitectureModel& arch,
                                                  const spd::SpdModel& spd,
                                                  int max_replicas_per_container) {
  if (max_replicas_per_container < 1)
    configError("max replicas per container must be at least 1");

  RuntimeConfiguration cfg;
  cfg.architecture = &arch;
  cfg.policies = &spd;
  cfg.max_replicas_per_container = max_replicas_per_container;

  std::set<std::string> claimed_containers;
  std::set<std::string> claimed_assemblies;

  // Pass 1: groups in declaration order, infrastructure instantiated.
  for (const auto& tg : spd.target_groups) {
    TargetGroupCfg g;
    g.name = tg.name;
    if (const auto* ei = std::get_if<spd::ElasticInfrastructure>(&tg.kind)) {
      if (!claimed_containers.insert(ei->unit_container).second)
        configError("container \"" + ei->unit_container +
                    "\" is the unit of more than one group");
      ElasticInfrastructureCfg c;
      c.unit_container = ei->unit_container;
      c.containers.push_back(cloneContainer(cfg, ei->unit_container));
      g.kind = std::move(c);
    } else if (const auto* sg = std::get_if<spd::ServiceGroup>(&tg.kind)) {
      ServiceGroupCfg c;
      c.unit_assembly = sg->unit_assembly;
      c.load_balancer = sg->load_balancer;
      c.hosting = sg->hosting_infrastructure;
      g.kind = std::move(c);
    } else {
      const auto& cc = std::get<spd::CompetingConsumersGroup>(tg.kind);
      CompetingConsumersCfg c;
      c.unit_assembly = cc.unit_consumer;
      c.queue = cc.queue;
      c.hosting = cc.hosting_infrastructure;
      g.kind = std::move(c);
    }
    cfg.groups.push_back(std::move(g));
  }

  // Pass 2: unit replicas on their hosting infrastructure.
  for (auto& g : cfg.groups) {
    const std::string* unit = unitAssemblyOf(g);
    if (!unit) continue;
    const std::string* hosting = hostingOf(g);
    TargetGroupCfg* host = cfg.findGroup(*hosting);
    if (!host || !host->isInfrastructure())
      configError("group \"" + g.name + "\" is hosted on \"" + *hosting +
                  "\" which is not an infrastructure group");
    auto& ei = std::get<ElasticInfrastructureCfg>(host->kind);
    ei.hosted_groups.push_back(g.name);

    const arch::Assembly* a = arch.findAssembly(*unit);
    if (!a) configError("unknown assembly \"" + *unit + "\"");
    const arch::Allocation* al = arch.findAllocation(*unit);
    if (!al) configError("assembly \"" + *unit + "\" is not allocated");
    if (al->container != ei.unit_container)
      configError("assembly \"" + *unit + "\" is allocated on \"" + al->container +
                  "\", not on the unit container of \"" + host->name + "\"");
    if (const auto* cc = std::get_if<CompetingConsumersCfg>(&g.kind)) {
      if (!a->consumes_queue || *a->consumes_queue != cc->queue)
        configError("assembly \"" + *unit + "\" does not consume queue \"" + cc->queue +
                    "\"");
    }
    if (!claimed_assemblies.insert(*unit).second)
      configError("assembly \"" + *unit + "\" is the unit of more than one group");

    replicaVectorOf(g)->push_back(makeReplica(cfg, *unit, ei.containers.front().id));
  }

  // Everything unclaimed exists once, fixed in place.
  for (const auto& c : arch.containers)
    if (!claimed_containers.count(c.name))
      cfg.rigid_containers.push_back(cloneContainer(cfg, c.name));

  for (const auto& a : arch.assemblies) {
    if (claimed_assemblies.count(a.name)) continue;
    const arch::Allocation* al = arch.findAllocation(a.name);
    if (!al) configError("assembly \"" + a.name + "\" is not allocated");
    int container_id = -1;
    for (const auto& rc : cfg.rigid_containers)
      if (rc.spec == al->container) container_id = rc.id;
    if (container_id < 0) {
      // Allocated on a container some infrastructure group owns; the fixed
      // instance lives on that group's original container.
      for (const auto& g : cfg.groups)
        if (const auto* ei = std::get_if<ElasticInfrastructureCfg>(&g.kind))
          if (ei->unit_container == al->container) container_id = ei->containers.front().id;
    }
    if (container_id < 0)
      configError("assembly \"" + a.name + "\" is allocated on unknown container \"" +
                  al->container + "\"");
    cfg.rigid_replicas.push_back(makeReplica(cfg, a.name, container_id));
  }

  return cfg;
}

TransformationReport scaleOutBottomUp(RuntimeConfiguration& cfg, const std::string& group,
                                      int target_size, const EnactmentContext& ctx) {
  auto [g, cur] = checkScale(cfg, group, target_size, true, true);
  auto& ei = std::get<ElasticInfrastructureCfg>(g->kind);

  std::vector<SizeChange> hosted_changes;
  for (const auto& name : ei.hosted_groups) {
    TargetGroupCfg* h = cfg.findGroup(name);
    hosted_changes.push_back({name, h->size(), h->size()});
  }

  for (int n = cur; n < target_size; ++n) {
    ContainerInstance c = cloneContainer(cfg, ei.unit_container);
    int cid = c.id;
    ei.containers.push_back(std::move(c));
    for (const auto& name : ei.hosted_groups) {
      TargetGroupCfg* h = cfg.findGroup(name);
      replicaVectorOf(*h)->push_back(makeReplica(cfg, *unitAssemblyOf(*h), cid));
    }
  }

  appendRecord(*g, ctx, cur, target_size, target_size);
  TransformationReport report;
  report.changes.push_back({group, cur, target_size});
  for (auto& hc : hosted_changes) {
    hc.after = cfg.findGroup(hc.group)->size();
    report.changes.push_back(hc);
    // Hosted groups chain their own history through the causal resize.
    if (hc.after != hc.before)
      cfg.findGroup(hc.group)->history.push_back(
          {ctx.time_s, ctx.policy, hc.before, hc.after, Applied{}});
  }
  return report;
}

TransformationReport scaleInBottomUp(RuntimeConfiguration& cfg, const std::string& group,
                                     int target_size, const EnactmentContext& ctx) {
  auto [g, cur] = checkScale(cfg, group, target_size, false, true);
  auto& ei = std::get<ElasticInfrastructureCfg>(g->kind);

  std::vector<SizeChange> hosted_changes;
  for (const auto& name : ei.hosted_groups) {
    TargetGroupCfg* h = cfg.findGroup(name);
    hosted_changes.push_back({name, h->size(), h->size()});
  }

  int want = cur - target_size;
  int removed = 0;
  bool progress = true;
  while (removed < want && progress) {
    progress = false;
    for (int i = static_cast<int>(ei.containers.size()) - 1; i >= 0; --i) {
      const ContainerInstance& c = ei.containers[i];
      if (!releasableAfterScaleIn(cfg, c)) continue;
      int cid = c.id;
      ei.containers.erase(ei.containers.begin() + i);
      for (auto& other : cfg.groups) {
        auto* rs = replicaVectorOf(other);
        if (!rs) continue;
        rs->erase(std::remove_if(rs->begin(), rs->end(),
                                 [&](const ReplicaInstance& r) {
                                   return r.container_id == cid;
                                 }),
                  rs->end());
      }
      ++removed;
      progress = true;
      break;
    }
  }

  int achieved = cur - removed;
  appendRecord(*g, ctx, cur, achieved, target_size);
  TransformationReport report;
  report.changes.push_back({group, cur, achieved});
  for (auto& hc : hosted_changes) {
    hc.after = cfg.findGroup(hc.group)->size();
    if (hc.after == hc.before) continue;
    report.changes.push_back(hc);
    cfg.findGroup(hc.group)->history.push_back(
        {ctx.time_s, ctx.policy, hc.before, hc.after, Applied{}});
  }
  return report;
}

TransformationReport scaleOutTopDown(RuntimeConfiguration& cfg, const std::string& group,
                                     int target_size, const EnactmentContext& ctx) {
  auto [g, cur] = checkScale(cfg, group, target_size, true, false);
  TargetGroupCfg* host = cfg.findGroup(*hostingOf(*g));
  auto& ei = std::get<ElasticInfrastructureCfg>(host->kind);
  int host_before = host->size();
  const std::string& unit = *unitAssemblyOf(*g);

  for (int n = cur; n < target_size; ++n) {
    int best_id = -1;
    int best_count = 0;
    int best_birth = 0;
    for (const auto& c : ei.containers) {
      int count = cfg.groupReplicasOn(c.id, group);
      if (count >= cfg.max_replicas_per_container) continue;
      if (best_id < 0 || count < best_count ||
          (count == best_count && c.birth_order < best_birth)) {
        best_id = c.id;
        best_count = count;
        best_birth = c.birth_order;
      }
    }
    if (best_id < 0) {
      // The group alone outgrew its infrastructure; add a bare container.
      ContainerInstance c = cloneContainer(cfg, ei.unit_container);
      best_id = c.id;
      ei.containers.push_back(std::move(c));
    }
    replicaVectorOf(*g)->push_back(makeReplica(cfg, unit, best_id));
  }

  appendRecord(*g, ctx, cur, target_size, target_size);
  TransformationReport report;
  report.changes.push_back({group, cur, target_size});
  if (host->size() != host_before) {
    report.changes.push_back({host->name, host_before, host->size()});
    host->history.push_back(
        {ctx.time_s, ctx.policy, host_before, host->size(), Applied{}});
  }
  return report;
}

TransformationReport scaleInTopDown(RuntimeConfiguration& cfg, const std::string& group,
                                    int target_size, const EnactmentContext& ctx) {
  auto [g, cur] = checkScale(cfg, group, target_size, false, false);
  TargetGroupCfg* host = cfg.findGroup(*hostingOf(*g));
  auto& ei = std::get<ElasticInfrastructureCfg>(host->kind);
  int host_before = host->size();
  auto* rs = replicaVectorOf(*g);

  for (int n = cur; n > target_size; --n) {
    ReplicaInstance victim = rs->back();
    rs->pop_back();
    for (std::size_t i = 0; i < ei.containers.size(); ++i) {
      const ContainerInstance& c = ei.containers[i];
      if (c.id != victim.container_id || c.birth_order == 0) continue;
      bool rigid = false;
      for (const auto& r : cfg.rigid_replicas)
        if (r.container_id == c.id) rigid = true;
      if (!rigid && cfg.replicasOn(c.id) == 0)
        ei.containers.erase(ei.containers.begin() + i);
      break;
    }
  }

  appendRecord(*g, ctx, cur, target_size, target_size);
  TransformationReport report;
  report.changes.push_back({group, cur, target_size});
  if (host->size() != host_before) {
    report.changes.push_back({host->name, host_before, host->size()});
    host->history.push_back(
        {ctx.time_s, ctx.policy, host_before, host->size(), Applied{}});
  }
  return report;
}

}  // namespace spdsim::runtime
