#include "jobshop/rewards.hpp"

#include <algorithm>

#include "jobshop/errors.hpp"

namespace jobshop {

MakespanReward::MakespanReward(const Dispatcher& dispatcher)
    : RewardObserver(dispatcher), last_makespan_(dispatcher.schedule().makespan()) {}

void MakespanReward::update(const ScheduledOperation& scheduled) {
    const Time current = std::max(last_makespan_, scheduled.end_time());
    push(static_cast<double>(last_makespan_ - current));
    last_makespan_ = current;
}

void MakespanReward::reset() {
    RewardObserver::reset();
    last_makespan_ = dispatcher().schedule().makespan();
}

Time idle_time_before(const Dispatcher& dispatcher, const ScheduledOperation& scheduled) {
    const auto sequence = dispatcher.schedule().machine_sequence(scheduled.machine_id);
    // The scheduled operation is already the last entry.
    if (sequence.size() < 2) return scheduled.start_time;
    return scheduled.start_time - sequence[sequence.size() - 2].end_time();
}

void IdleTimeReward::update(const ScheduledOperation& scheduled) {
    push(-static_cast<double>(idle_time_before(dispatcher(), scheduled)));
}

void ScheduledAreaReward::update(const ScheduledOperation& scheduled) {
    push(static_cast<double>(scheduled.operation.duration - idle_time_before(dispatcher(), scheduled)));
}

void SparseMakespanReward::update(const ScheduledOperation&) {
    push(dispatcher().is_complete() ? -static_cast<double>(dispatcher().schedule().makespan()) : 0.0);
}

RewardType reward_type(const std::string& name) {
    for (auto type : {RewardType::makespan, RewardType::idle_time, RewardType::scheduled_area, RewardType::sparse_makespan})
        if (name == to_string(type)) return type;
    throw ConfigError("unknown reward '" + name + "'");
}

const char* to_string(RewardType type) {
    switch (type) {
        case RewardType::makespan: return "makespan";
        case RewardType::idle_time: return "idle_time";
        case RewardType::scheduled_area: return "scheduled_area";
        case RewardType::sparse_makespan: return "sparse_makespan";
    }
    return "?";
}

std::unique_ptr<RewardObserver> make_reward(const Dispatcher& dispatcher, RewardType type) {
    switch (type) {
        case RewardType::makespan: return std::make_unique<MakespanReward>(dispatcher);
        case RewardType::idle_time: return std::make_unique<IdleTimeReward>(dispatcher);
        case RewardType::scheduled_area: return std::make_unique<ScheduledAreaReward>(dispatcher);
        case RewardType::sparse_makespan: return std::make_unique<SparseMakespanReward>(dispatcher);
    }
    throw ConfigError("unknown reward type");
}

}  // namespace jobshop
