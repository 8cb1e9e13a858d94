#include "spdsim/runtime/config.hpp"

namespace spdsim::runtime {
namespace {

template <typename F>
void forEachReplicaVector(const RuntimeConfiguration& cfg, F&& f) {
  for (const auto& g : cfg.groups) {
    if (const auto* sg = std::get_if<ServiceGroupCfg>(&g.kind))
      f(sg->replicas);
    else if (const auto* cc = std::get_if<CompetingConsumersCfg>(&g.kind))
      f(cc->replicas);
  }
}

}  // namespace

TargetGroupCfg* RuntimeConfiguration::findGroup(const std::string& name) {
  for (auto& g : groups)
    if (g.name == name) return &g;
  return nullptr;
}

const TargetGroupCfg* RuntimeConfiguration::findGroup(const std::string& name) const {
  for (const auto& g : groups)
    if (g.name == name) return &g;
  return nullptr;
}

std::vector<const ContainerInstance*> RuntimeConfiguration::liveContainers() const {
  std::vector<const ContainerInstance*> out;
  for (const auto& c : rigid_containers) out.push_back(&c);
  for (const auto& g : groups)
    if (const auto* ei = std::get_if<ElasticInfrastructureCfg>(&g.kind))
      for (const auto& c : ei->containers) out.push_back(&c);
  return out;
}

std::vector<const ReplicaInstance*> RuntimeConfiguration::liveReplicas() const {
  std::vector<const ReplicaInstance*> out;
  for (const auto& r : rigid_replicas) out.push_back(&r);
  forEachReplicaVector(*this, [&](const std::vector<ReplicaInstance>& rs) {
    for (const auto& r : rs) out.push_back(&r);
  });
  return out;
}

std::vector<const ReplicaInstance*> RuntimeConfiguration::replicasOf(
    const std::string& assembly) const {
  std::vector<const ReplicaInstance*> out;
  for (const auto* r : liveReplicas())
    if (r->assembly == assembly) out.push_back(r);
  return out;
}

const ContainerInstance* RuntimeConfiguration::containerById(int id) const {
  for (const auto& c : rigid_containers)
    if (c.id == id) return &c;
  for (const auto& g : groups)
    if (const auto* ei = std::get_if<ElasticInfrastructureCfg>(&g.kind))
      for (const auto& c : ei->containers)
        if (c.id == id) return &c;
  return nullptr;
}

int RuntimeConfiguration::groupReplicasOn(int container_id, const std::string& group) const {
  const TargetGroupCfg* g = findGroup(group);
  if (!g) return 0;
  const std::vector<ReplicaInstance>* rs = nullptr;
  if (const auto* sg = std::get_if<ServiceGroupCfg>(&g->kind))
    rs = &sg->replicas;
  else if (const auto* cc = std::get_if<CompetingConsumersCfg>(&g->kind))
    rs = &cc->replicas;
  if (!rs) return 0;
  int n = 0;
  for (const auto& r : *rs)
    if (r.container_id == container_id) ++n;
  return n;
}

int RuntimeConfiguration::replicasOn(int container_id) const {
  int n = 0;
  for (const auto& r : rigid_replicas)
    if (r.container_id == container_id) ++n;
  forEachReplicaVector(*this, [&](const std::vector<ReplicaInstance>& rs) {
    for (const auto& r : rs)
      if (r.container_id == container_id) ++n;
  });
  return n;
}

}  // namespace spdsim::runtime
