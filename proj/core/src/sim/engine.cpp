#include "spdsim/sim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "spdsim/diagnostics.hpp"
#include "spdsim/sim/enactment.hpp"
#include "spdsim/sim/monitor.hpp"
#include "sim/random.hpp"

namespace spdsim::sim {
namespace {

// Work-unit tolerance for finished processor-sharing jobs; float drift per
// update is orders of magnitude below this.
constexpr double kWorkEpsilon = 1e-9;

enum EvKind { kUserArrival, kDemandDone, kConsumerPoll, kMonitorTick };

struct Ev {
  double time;
  long long seq;
  int kind;
  int a;        // user, container or replica id
  long long b;  // generation or serving-execution token
};

struct EvAfter {
  bool operator()(const Ev& x, const Ev& y) const {
    if (x.time != y.time) return x.time > y.time;
    return x.seq > y.seq;
  }
};

struct PsJob {
  long long execution;
  double remaining;
};
struct FcfsJob {
  long long execution;
  double work;
};

struct ContainerState {
  int id = 0;
  std::string group;  // owning infrastructure group, "" for fixed containers
  double rate = 1;
  arch::Scheduling sched = arch::Scheduling::ProcessorSharing;
  bool live = true;
  double busy_mark = 0;
  // processor sharing
  std::vector<PsJob> ps_jobs;
  double last_update = 0;
  long long generation = 0;
  // FCFS; front is in service
  std::deque<FcfsJob> fcfs_jobs;
};

bool busyNow(const ContainerState& c) {
  return c.sched == arch::Scheduling::ProcessorSharing ? !c.ps_jobs.empty()
                                                       : !c.fcfs_jobs.empty();
}

struct ReplicaState {
  int id = 0;
  std::string assembly;
  int container = 0;
  std::string group;  // "" for fixed assemblies
  bool live = true;
  int active = 0;  // executions running here
  bool is_consumer = false;
  bool consumer_busy = false;
  std::string queue;
  const arch::ProvidedOperation* handler = nullptr;
};

struct Frame {
  const std::vector<arch::Action>* actions;
  std::size_t index = 0;
};

struct DoneUser {
  int user;
  std::string operation;
};
struct DoneCall {
  long long parent;
};
struct DoneConsumer {
  int replica;
  double enqueue_time;
};
using DoneAction = std::variant<DoneUser, DoneCall, DoneConsumer>;

struct Execution {
  int replica = 0;
  std::string group;
  double start_time = 0;
  std::vector<Frame> frames;
  DoneAction done;
};

class Engine {
 public:
  Engine(runtime::RuntimeConfiguration& cfg, const SimulationParams& params)
      : cfg_(cfg),
        model_(cfg.architecture),
        params_(params),
        monitor_(retentionFor(*cfg.policies)) {
    if (params_.monitor_interval_s > 0)
      eval_every_ = std::max<long long>(
          1, std::llround(params_.evaluation_interval_s / params_.monitor_interval_s));
    std::uint64_t site = 0;
    std::function<void(const std::vector<arch::Action>&)> index =
        [&](const std::vector<arch::Action>& actions) {
          for (const auto& a : actions) {
            sites_[&a] = site++;
            if (const auto* br = std::get_if<arch::Branch>(&a.v))
              for (const auto& arm : br->arms) index(arm.actions);
          }
        };
    for (const auto& c : model_->components)
      for (const auto& op : c.operations) index(op.behavior);
  }

  SimulationResult run() {
    result_.horizon_s = params_.horizon_s;
    result_.warmup_s = params_.warmup_s;
    syncWithConfig(0);

    int population = model_->usage.population;
    for (int u = 0; u < population; ++u) {
      think_streams_.emplace_back(params_.seed, StreamKind::UserThink,
                                  static_cast<std::uint64_t>(u));
      scenario_streams_.emplace_back(params_.seed, StreamKind::UserScenario,
                                     static_cast<std::uint64_t>(u));
    }
    for (int u = 0; u < population; ++u)
      schedule(think_streams_[u].sample(model_->usage.think_time), kUserArrival, u, 0);
    if (params_.monitor_interval_s > 0)
      schedule(params_.monitor_interval_s, kMonitorTick, 0, 0);

    while (!events_.empty() && events_.top().time <= params_.horizon_s) {
      Ev ev = events_.top();
      events_.pop();
      switch (ev.kind) {
        case kUserArrival: onUserArrival(ev.a, ev.time); break;
        case kDemandDone: onDemandDone(ev.a, ev.b, ev.time); break;
        case kConsumerPoll: onConsumerPoll(ev.a, ev.time); break;
        case kMonitorTick: onMonitorTick(ev.time); break;
      }
    }
    finalize();
    return std::move(result_);
  }

 private:
  static double retentionFor(const spd::SpdModel& spd) {
    double retention = 61;
    for (const auto& p : spd.policies) {
      const auto& st = p.trigger.stimulus;
      bool windowed = st.kind == spd::StimulusKind::CpuUtilization ||
                      st.kind == spd::StimulusKind::QueueLength ||
                      st.kind == spd::StimulusKind::OperationResponseTime;
      if (!windowed) continue;
      double w = st.window_s.value_or(60.0);
      int n = 1;
      if (const auto* ft = std::get_if<spd::FireOnTrend>(&p.trigger.behavior))
        n = ft->window_count;
      retention = std::max(retention, w * n + 1);
    }
    return retention;
  }

  void schedule(double time, int kind, int a, long long b) {
    events_.push({time, next_seq_++, kind, a, b});
  }

  // [from, to] clipped to the observation interval.
  double observed(double from, double to) const {
    double lo = std::max(from, params_.warmup_s);
    double hi = std::min(to, params_.horizon_s);
    return std::max(0.0, hi - lo);
  }

  void noteBusyChange(ContainerState& c, bool was_busy, double now) {
    bool is_busy = busyNow(c);
    if (was_busy == is_busy) return;
    if (is_busy)
      c.busy_mark = now;
    else
      result_.busy_seconds[c.group] += observed(c.busy_mark, now);
  }

  bool containerReferenced(int cid) const {
    for (const auto& [id, r] : replica_states_)
      if (r.container == cid) return true;
    return false;
  }

  void maybeReleaseContainer(int cid) {
    auto it = container_states_.find(cid);
    if (it == container_states_.end()) return;
    ContainerState& c = it->second;
    if (!c.live && !busyNow(c) && !containerReferenced(cid)) container_states_.erase(it);
  }

  void maybeReleaseReplica(int rid) {
    auto it = replica_states_.find(rid);
    if (it == replica_states_.end()) return;
    ReplicaState& r = it->second;
    if (!r.live && r.active == 0 && !r.consumer_busy) {
      int cid = r.container;
      replica_states_.erase(it);
      maybeReleaseContainer(cid);
    }
  }

  // Mirrors the runtime configuration into the engine's instance tables.
  // Removed instances drain: they take no new work but finish what they have.
  void syncWithConfig(double now) {
    std::set<int> live_containers;
    auto ensureContainer = [&](const runtime::ContainerInstance& ci,
                               const std::string& group) {
      live_containers.insert(ci.id);
      auto [it, inserted] = container_states_.try_emplace(ci.id);
      ContainerState& c = it->second;
      if (inserted) {
        c.id = ci.id;
        c.group = group;
        c.rate = ci.rate_wu_per_s;
        c.sched = ci.scheduling;
        c.last_update = now;
        result_.busy_seconds.try_emplace(group, 0.0);
      }
      c.live = true;
    };
    for (const auto& rc : cfg_.rigid_containers) ensureContainer(rc, "");
    for (const auto& g : cfg_.groups)
      if (const auto* ei = std::get_if<runtime::ElasticInfrastructureCfg>(&g.kind))
        for (const auto& ci : ei->containers) ensureContainer(ci, g.name);
    for (auto& [id, c] : container_states_)
      if (!live_containers.count(id)) c.live = false;

    std::set<int> live_replicas;
    auto ensureReplica = [&](const runtime::ReplicaInstance& ri, const std::string& group,
                             bool consumer, const std::string& queue) {
      live_replicas.insert(ri.id);
      auto [it, inserted] = replica_states_.try_emplace(ri.id);
      ReplicaState& r = it->second;
      if (inserted) {
        r.id = ri.id;
        r.assembly = ri.assembly;
        r.container = ri.container_id;
        r.group = group;
        r.is_consumer = consumer;
        r.queue = queue;
        if (consumer) {
          r.handler = consumerHandler(ri.assembly);
          schedule(now, kConsumerPoll, ri.id, 0);
        }
      }
      r.live = true;
    };
    for (const auto& ri : cfg_.rigid_replicas) {
      // consumption is declared by the assembly; a group only makes it elastic
      const arch::Assembly* a = model_->findAssembly(ri.assembly);
      bool consumes = a && a->consumes_queue.has_value();
      ensureReplica(ri, "", consumes, consumes ? *a->consumes_queue : "");
    }
    for (const auto& g : cfg_.groups) {
      if (const auto* sg = std::get_if<runtime::ServiceGroupCfg>(&g.kind))
        for (const auto& ri : sg->replicas) ensureReplica(ri, g.name, false, "");
      else if (const auto* cc = std::get_if<runtime::CompetingConsumersCfg>(&g.kind))
        for (const auto& ri : cc->replicas) ensureReplica(ri, g.name, true, cc->queue);
    }
    std::vector<int> drained;
    for (auto& [id, r] : replica_states_)
      if (!live_replicas.count(id)) {
        r.live = false;
        if (r.active == 0 && !r.consumer_busy) drained.push_back(id);
      }
    for (int id : drained) maybeReleaseReplica(id);
    std::vector<int> releasable;
    for (auto& [id, c] : container_states_)
      if (!c.live) releasable.push_back(id);
    for (int id : releasable) maybeReleaseContainer(id);

    for (const auto& g : cfg_.groups) {
      int size = g.size();
      auto it = last_size_.find(g.name);
      if (it == last_size_.end() || it->second != size) {
        result_.timeline.push_back({g.name, now, size});
        last_size_[g.name] = size;
      }
    }
  }

  const arch::ProvidedOperation* consumerHandler(const std::string& assembly) const {
    const arch::Assembly* a = model_->findAssembly(assembly);
    const arch::Component* comp = model_->findComponent(a->component);
    if (a->consume_operation) return comp->findOperation(*a->consume_operation);
    return &comp->operations.front();
  }

  RandomStream& streamFor(StreamKind kind, std::uint64_t site) {
    std::uint64_t key = (static_cast<std::uint64_t>(kind) << 48) ^ site;
    auto [it, inserted] = site_streams_.try_emplace(key);
    if (inserted) it->second = RandomStream(params_.seed, kind, site);
    return it->second;
  }

  int pickReplica(const std::string& assembly) {
    auto replicas = cfg_.replicasOf(assembly);
    if (replicas.empty())
      throw Error("SIM_ERROR", "no live replica of assembly \"" + assembly + "\"");
    std::size_t idx = rr_[assembly]++ % replicas.size();
    return replicas[idx]->id;
  }

  long long createExecution(int replica, const arch::ProvidedOperation* op,
                            DoneAction done, double now) {
    long long id = next_execution_++;
    Execution e;
    e.replica = replica;
    e.group = replica_states_.at(replica).group;
    e.start_time = now;
    e.frames.push_back({&op->behavior, 0});
    e.done = std::move(done);
    executions_.emplace(id, std::move(e));
    ++replica_states_.at(replica).active;
    runnable_.push_back(id);
    return id;
  }

  void startCall(const std::string& assembly, const std::string& operation,
                 DoneAction done, double now) {
    int replica = pickReplica(assembly);
    const arch::Assembly* a = model_->findAssembly(assembly);
    const arch::Component* comp = model_->findComponent(a->component);
    const arch::ProvidedOperation* op = comp->findOperation(operation);
    if (!op)
      throw Error("SIM_ERROR", "no operation \"" + operation + "\" on \"" + assembly + "\"");
    createExecution(replica, op, std::move(done), now);
  }

  void addJob(int container_id, double work, long long execution, double now) {
    ContainerState& c = container_states_.at(container_id);
    bool was_busy = busyNow(c);
    if (c.sched == arch::Scheduling::ProcessorSharing) {
      psUpdate(c, now);
      c.ps_jobs.push_back({execution, work});
      psReschedule(c, now);
    } else {
      c.fcfs_jobs.push_back({execution, work});
      if (c.fcfs_jobs.size() == 1)
        schedule(now + work / c.rate, kDemandDone, c.id, execution);
    }
    noteBusyChange(c, was_busy, now);
  }

  void psUpdate(ContainerState& c, double now) {
    double dt = now - c.last_update;
    if (dt > 0 && !c.ps_jobs.empty()) {
      double dec = dt * c.rate / static_cast<double>(c.ps_jobs.size());
      for (auto& j : c.ps_jobs) j.remaining -= dec;
    }
    c.last_update = now;
  }

  void psReschedule(ContainerState& c, double now) {
    ++c.generation;
    if (c.ps_jobs.empty()) return;
    double min_remaining = c.ps_jobs.front().remaining;
    for (const auto& j : c.ps_jobs) min_remaining = std::min(min_remaining, j.remaining);
    min_remaining = std::max(min_remaining, 0.0);
    double dt = min_remaining * static_cast<double>(c.ps_jobs.size()) / c.rate;
    schedule(now + dt, kDemandDone, c.id, c.generation);
  }

  void onDemandDone(int cid, long long token, double now) {
    auto it = container_states_.find(cid);
    if (it == container_states_.end()) return;
    ContainerState& c = it->second;
    bool was_busy = busyNow(c);
    if (c.sched == arch::Scheduling::ProcessorSharing) {
      if (token != c.generation) return;  // superseded schedule
      psUpdate(c, now);
      auto done_it = std::partition(c.ps_jobs.begin(), c.ps_jobs.end(),
                                    [](const PsJob& j) { return j.remaining > kWorkEpsilon; });
      for (auto j = done_it; j != c.ps_jobs.end(); ++j) runnable_.push_back(j->execution);
      c.ps_jobs.erase(done_it, c.ps_jobs.end());
      psReschedule(c, now);
    } else {
      if (c.fcfs_jobs.empty() || c.fcfs_jobs.front().execution != token) return;
      runnable_.push_back(c.fcfs_jobs.front().execution);
      c.fcfs_jobs.pop_front();
      if (!c.fcfs_jobs.empty())
        schedule(now + c.fcfs_jobs.front().work / c.rate, kDemandDone, cid,
                 c.fcfs_jobs.front().execution);
    }
    noteBusyChange(c, was_busy, now);
    maybeReleaseContainer(cid);
    pump(now);
  }

  void resume(long long id, double now) {
    while (true) {
      Execution& e = executions_.at(id);
      if (e.frames.empty()) {
        completeExecution(id, now);
        return;
      }
      Frame& f = e.frames.back();
      if (f.index >= f.actions->size()) {
        e.frames.pop_back();
        continue;
      }
      const arch::Action& act = (*f.actions)[f.index++];
      if (const auto* ia = std::get_if<arch::InternalAction>(&act.v)) {
        double work = streamFor(StreamKind::Demand, sites_.at(&act)).sample(ia->demand);
        addJob(replica_states_.at(e.replica).container, work, id, now);
        return;  // resumed when the demand completes
      }
      if (const auto* call = std::get_if<arch::ExternalCall>(&act.v)) {
        auto resolved = arch::resolveCall(*model_, replica_states_.at(e.replica).assembly,
                                          call->component);
        if (resolved.status != arch::CallResolution::Ok)
          throw Error("SIM_ERROR", "unresolvable call to \"" + call->component + "\"");
        startCall(resolved.assembly->name, call->operation, DoneCall{id}, now);
        return;  // resumed when the callee responds
      }
      if (const auto* send = std::get_if<arch::AsyncSend>(&act.v)) {
        enqueueMessage(send->queue, now);
        continue;
      }
      const auto& br = std::get<arch::Branch>(act.v);
      double x = streamFor(StreamKind::Branch, sites_.at(&act)).uniform01();
      const arch::Branch::Arm* arm = &br.arms.back();
      double acc = 0;
      for (const auto& candidate : br.arms) {
        acc += candidate.probability;
        if (x < acc) {
          arm = &candidate;
          break;
        }
      }
      e.frames.push_back({&arm->actions, 0});
    }
  }

  void completeExecution(long long id, double now) {
    Execution e = std::move(executions_.at(id));
    executions_.erase(id);
    ReplicaState& r = replica_states_.at(e.replica);
    --r.active;

    if (const auto* du = std::get_if<DoneUser>(&e.done)) {
      ++result_.calls_completed;
      double duration = now - e.start_time;
      result_.completions.push_back({now, duration, du->operation});
      if (!e.group.empty()) monitor_.recordCompletion(e.group, now, duration);
      double think = think_streams_[du->user].sample(model_->usage.think_time);
      schedule(now + think, kUserArrival, du->user, 0);
    } else if (const auto* dc = std::get_if<DoneCall>(&e.done)) {
      if (!e.group.empty()) monitor_.recordCompletion(e.group, now, now - e.start_time);
      runnable_.push_back(dc->parent);
    } else {
      const auto& dm = std::get<DoneConsumer>(e.done);
      ++result_.messages_consumed;
      if (!e.group.empty())
        monitor_.recordCompletion(e.group, now, now - dm.enqueue_time);
      r.consumer_busy = false;
      if (r.live) pollConsumer(r.id, now);
    }
    maybeReleaseReplica(e.replica);
  }

  void pollConsumer(int rid, double now) {
    ReplicaState& r = replica_states_.at(rid);
    if (!r.live || r.consumer_busy) return;
    auto& q = queue_states_[r.queue];
    if (q.empty()) return;
    double enqueue_time = q.front();
    q.pop_front();
    r.consumer_busy = true;
    createExecution(rid, r.handler, DoneConsumer{rid, enqueue_time}, now);
  }

  void enqueueMessage(const std::string& queue, double now) {
    ++result_.messages_enqueued;
    queue_states_[queue].push_back(now);
    wakeIdleConsumer(queue, now);
  }

  void wakeIdleConsumer(const std::string& queue, double now) {
    for (const auto& g : cfg_.groups) {
      const auto* cc = std::get_if<runtime::CompetingConsumersCfg>(&g.kind);
      if (!cc || cc->queue != queue) continue;
      for (const auto& ri : cc->replicas) {
        auto it = replica_states_.find(ri.id);
        if (it != replica_states_.end() && it->second.live && !it->second.consumer_busy) {
          schedule(now, kConsumerPoll, ri.id, 0);
          return;
        }
      }
    }
    for (const auto& ri : cfg_.rigid_replicas) {
      auto it = replica_states_.find(ri.id);
      if (it == replica_states_.end()) continue;
      const ReplicaState& r = it->second;
      if (r.is_consumer && r.queue == queue && r.live && !r.consumer_busy) {
        schedule(now, kConsumerPoll, ri.id, 0);
        return;
      }
    }
  }

  void onConsumerPoll(int rid, double now) {
    auto it = replica_states_.find(rid);
    if (it == replica_states_.end() || !it->second.live) return;
    if (it->second.consumer_busy) {
      // Woken twice for distinct messages; pass the surplus on.
      if (!queue_states_[it->second.queue].empty())
        wakeIdleConsumer(it->second.queue, now);
      return;
    }
    pollConsumer(rid, now);
    pump(now);
  }

  void onUserArrival(int user, double now) {
    ++result_.calls_started;
    const arch::UsageModel& usage = model_->usage;
    const arch::ScenarioCall* chosen = &usage.scenario.front();
    if (usage.scenario.size() > 1) {
      double x = scenario_streams_[user].uniform01();
      double acc = 0;
      for (const auto& sc : usage.scenario) {
        acc += sc.probability;
        chosen = &sc;
        if (x < acc) break;
      }
    }
    startCall(chosen->assembly, chosen->operation,
              DoneUser{user, chosen->assembly + "." + chosen->operation}, now);
    pump(now);
  }

  void sampleMonitors(double now) {
    for (const auto& g : cfg_.groups) {
      std::vector<int> cids;
      if (const auto* ei = std::get_if<runtime::ElasticInfrastructureCfg>(&g.kind)) {
        for (const auto& c : ei->containers) cids.push_back(c.id);
      } else {
        const std::vector<runtime::ReplicaInstance>* replicas = nullptr;
        if (const auto* sg = std::get_if<runtime::ServiceGroupCfg>(&g.kind))
          replicas = &sg->replicas;
        else
          replicas = &std::get<runtime::CompetingConsumersCfg>(g.kind).replicas;
        std::set<int> seen;
        for (const auto& r : *replicas)
          if (seen.insert(r.container_id).second) cids.push_back(r.container_id);
      }
      if (!cids.empty()) {
        int busy = 0;
        for (int cid : cids) {
          auto it = container_states_.find(cid);
          if (it != container_states_.end() && busyNow(it->second)) ++busy;
        }
        monitor_.recordUtilization(g.name, now,
                                   100.0 * busy / static_cast<double>(cids.size()));
      }
      if (const auto* cc = std::get_if<runtime::CompetingConsumersCfg>(&g.kind))
        monitor_.recordQueueLength(
            g.name, now, static_cast<double>(queue_states_[cc->queue].size()));
    }
  }

  void onMonitorTick(double now) {
    sampleMonitors(now);
    ++tick_count_;
    if (tick_count_ % eval_every_ == 0) {
      if (evaluatePolicies(cfg_, monitor_, now)) syncWithConfig(now);
    }
    double next = now + params_.monitor_interval_s;
    if (next <= params_.horizon_s) schedule(next, kMonitorTick, 0, 0);
  }

  void pump(double now) {
    while (!runnable_.empty()) {
      long long id = runnable_.front();
      runnable_.pop_front();
      resume(id, now);
    }
  }

  void finalize() {
    for (auto& [id, c] : container_states_)
      if (busyNow(c))
        result_.busy_seconds[c.group] += observed(c.busy_mark, params_.horizon_s);

    struct Keyed {
      double time;
      std::size_t group_index;
      std::size_t seq;
      TraceEntry entry;
    };
    std::vector<Keyed> keyed;
    for (std::size_t gi = 0; gi < cfg_.groups.size(); ++gi) {
      const auto& g = cfg_.groups[gi];
      for (std::size_t si = 0; si < g.history.size(); ++si)
        keyed.push_back({g.history[si].time_s, gi, si, {g.name, g.history[si]}});
    }
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
      if (a.time != b.time) return a.time < b.time;
      if (a.group_index != b.group_index) return a.group_index < b.group_index;
      return a.seq < b.seq;
    });
    for (auto& k : keyed) result_.trace.push_back(std::move(k.entry));
  }

  runtime::RuntimeConfiguration& cfg_;
  const arch::ArchitectureModel* model_;
  SimulationParams params_;
  Monitor monitor_;
  SimulationResult result_;

  std::priority_queue<Ev, std::vector<Ev>, EvAfter> events_;
  long long next_seq_ = 0;
  long long next_execution_ = 0;
  long long tick_count_ = 0;
  long long eval_every_ = 15;

  std::map<int, ContainerState> container_states_;
  std::map<int, ReplicaState> replica_states_;
  std::map<long long, Execution> executions_;
  std::deque<long long> runnable_;
  std::map<std::string, std::deque<double>> queue_states_;  // enqueue times
  std::map<std::string, std::size_t> rr_;
  std::map<std::string, int> last_size_;

  std::vector<RandomStream> think_streams_;
  std::vector<RandomStream> scenario_streams_;
  std::map<std::uint64_t, RandomStream> site_streams_;
  std::map<const void*, std::uint64_t> sites_;
};

}  // namespace

SimulationResult simulate(runtime::RuntimeConfiguration& cfg,
                          const SimulationParams& params) {
  Engine engine(cfg, params);
  return engine.run();
}

}  // namespace spdsim::sim
