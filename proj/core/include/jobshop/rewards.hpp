#pragma once

#include <memory>
#include <string>
#include <vector>

#include "jobshop/dispatching.hpp"

namespace jobshop {

// Appends one reward per dispatch.
class RewardObserver : public DispatcherObserver {
public:
    explicit RewardObserver(const Dispatcher& dispatcher) : dispatcher_(&dispatcher) {}

    const std::vector<double>& rewards() const noexcept { return rewards_; }
    double last_reward() const noexcept { return rewards_.empty() ? 0.0 : rewards_.back(); }
    void reset() override { rewards_.clear(); }

protected:
    const Dispatcher& dispatcher() const noexcept { return *dispatcher_; }
    void push(double reward) { rewards_.push_back(reward); }

private:
    const Dispatcher* dispatcher_;
    std::vector<double> rewards_;
};

// Partial makespan before the dispatch minus partial makespan after it.
class MakespanReward final : public RewardObserver {
public:
    explicit MakespanReward(const Dispatcher& dispatcher);
    void update(const ScheduledOperation& scheduled) override;
    void reset() override;

private:
    Time last_makespan_ = 0;
};

// Minus the idle gap on the machine right before the operation starts.
class IdleTimeReward final : public RewardObserver {
public:
    using RewardObserver::RewardObserver;
    void update(const ScheduledOperation& scheduled) override;
};

// Duration of the operation minus the idle gap before it.
class ScheduledAreaReward final : public RewardObserver {
public:
    using RewardObserver::RewardObserver;
    void update(const ScheduledOperation& scheduled) override;
};

// Zero except on the completing dispatch, which yields minus the makespan.
class SparseMakespanReward final : public RewardObserver {
public:
    using RewardObserver::RewardObserver;
    void update(const ScheduledOperation& scheduled) override;
};

enum class RewardType { makespan, idle_time, scheduled_area, sparse_makespan };

RewardType reward_type(const std::string& name);
const char* to_string(RewardType type);
std::unique_ptr<RewardObserver> make_reward(const Dispatcher& dispatcher, RewardType type);

// Idle time on the machine immediately before the scheduled operation.
Time idle_time_before(const Dispatcher& dispatcher, const ScheduledOperation& scheduled);

}  // namespace jobshop
