#pragma once

// Runtime configuration: the instantiated architecture a simulation run
// operates on. Target groups own container and replica instances; the
// transformation operations in transform.hpp grow and shrink them.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spdsim/arch/model.hpp"
#include "spdsim/spd/model.hpp"

namespace spdsim::runtime {

struct ContainerInstance {
  int id = 0;                // unique across the whole run
  std::string spec;          // container declaration it was cloned from
  double rate_wu_per_s = 0;
  arch::Scheduling scheduling = arch::Scheduling::ProcessorSharing;
  int birth_order = 0;       // 0 = original instance, newest has the highest
};

struct ReplicaInstance {
  int id = 0;
  std::string assembly;      // assembly declaration it instantiates
  int container_id = 0;
  int birth_order = 0;
};

// Outcome of enacting a policy on its target group.
struct Applied {};
struct Clamped {
  int from = 0;  // raw adjustment result
  int to = 0;    // size actually enacted
};
struct Vetoed {
  std::string reason;  // "cooldown", "interval", "size-min", "size-max"
};
using EnactmentOutcome = std::variant<Applied, Clamped, Vetoed>;

struct EnactmentRecord {
  double time_s = 0;
  std::string policy;
  int size_before = 0;
  int size_after = 0;
  EnactmentOutcome outcome;
};

// Effective records changed the configuration; vetoed ones did not.
inline bool isEffective(const EnactmentRecord& r) {
  return !std::holds_alternative<Vetoed>(r.outcome);
}

struct ElasticInfrastructureCfg {
  std::string unit_container;
  std::vector<ContainerInstance> containers;   // index 0 is the original
  std::vector<std::string> hosted_groups;      // groups that grow with this one
};

struct ServiceGroupCfg {
  std::string unit_assembly;
  std::optional<std::string> load_balancer;
  std::string hosting;                         // elastic infrastructure group
  std::vector<ReplicaInstance> replicas;
};

struct CompetingConsumersCfg {
  std::string unit_assembly;
  std::string queue;
  std::string hosting;
  std::vector<ReplicaInstance> replicas;
};

struct TargetGroupCfg {
  std::string name;
  std::variant<ElasticInfrastructureCfg, ServiceGroupCfg, CompetingConsumersCfg> kind;
  std::vector<EnactmentRecord> history;

  int size() const {
    if (const auto* ei = std::get_if<ElasticInfrastructureCfg>(&kind))
      return static_cast<int>(ei->containers.size());
    if (const auto* sg = std::get_if<ServiceGroupCfg>(&kind))
      return static_cast<int>(sg->replicas.size());
    return static_cast<int>(std::get<CompetingConsumersCfg>(kind).replicas.size());
  }
  bool isInfrastructure() const {
    return std::holds_alternative<ElasticInfrastructureCfg>(kind);
  }
};

struct RuntimeConfiguration {
  const arch::ArchitectureModel* architecture = nullptr;
  const spd::SpdModel* policies = nullptr;

  std::vector<TargetGroupCfg> groups;
  std::vector<ContainerInstance> rigid_containers;  // outside every group
  std::vector<ReplicaInstance> rigid_replicas;

  int max_replicas_per_container = 1;  // packing limit for group-local growth

  int next_container_id = 0;
  int next_replica_id = 0;
  int next_container_birth = 0;
  int next_replica_birth = 0;

  TargetGroupCfg* findGroup(const std::string& name);
  const TargetGroupCfg* findGroup(const std::string& name) const;

  // Live instances, rigid ones first, then per group in declaration order.
  std::vector<const ContainerInstance*> liveContainers() const;
  std::vector<const ReplicaInstance*> liveReplicas() const;

  // Replicas instantiating the given assembly declaration, oldest first.
  std::vector<const ReplicaInstance*> replicasOf(const std::string& assembly) const;

  const ContainerInstance* containerById(int id) const;

  // Replicas of one group living on one container.
  int groupReplicasOn(int container_id, const std::string& group) const;

  // Replicas of any group or rigid assembly living on one container.
  int replicasOn(int container_id) const;
};

}  // namespace spdsim::runtime
