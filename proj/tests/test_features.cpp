#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "jobshop/env.hpp"
#include "jobshop/features.hpp"
#include "jobshop/rules.hpp"

using namespace jobshop;
using fixtures::furniture;
using fixtures::two_job;

namespace {

std::vector<double> column(const Matrix& m, std::size_t c = 0) {
    std::vector<double> out;
    for (std::size_t r = 0; r < m.rows; ++r) out.push_back(m(r, c));
    return out;
}

// Widens its operation matrix on the first update.
class GrowingObserver : public FeatureObserver {
public:
    explicit GrowingObserver(const Dispatcher& d) : FeatureObserver(d, "growing", {FeatureKind::operations}) { initialize_features(); }
    void initialize_features() override {
        matrix(FeatureKind::operations) = Matrix(static_cast<std::size_t>(dispatcher().instance().num_operations()), 1);
    }
    void update(const ScheduledOperation&) override {
        matrix(FeatureKind::operations) = Matrix(static_cast<std::size_t>(dispatcher().instance().num_operations()), 2);
    }
};

}  // namespace

TEST_CASE("ready status on a fresh instance") {
    Dispatcher d(furniture());
    const auto obs = status_features(d, StatusKind::ready);
    d.subscribe(*obs);
    CHECK(column(obs->features().at(FeatureKind::operations)) == std::vector<double>{1, 0, 0, 1, 0, 0, 1, 0, 0});
}

TEST_CASE("completed status follows the current time") {
    Dispatcher d(furniture());
    const auto completed = status_features(d, StatusKind::completed);
    const auto scheduled = status_features(d, StatusKind::scheduled);
    d.subscribe(*completed);
    d.subscribe(*scheduled);
    d.dispatch(d.instance().operation(2, 0));
    d.dispatch(d.instance().operation(0, 0));
    CHECK(d.current_time() == 2);
    const auto ops = completed->features().at(FeatureKind::operations);
    CHECK(ops(6, 0) == 1);
    CHECK(ops(0, 0) == 0);
    CHECK(scheduled->features().at(FeatureKind::operations)(0, 0) == 1);
    // Machine 0 still processes the table cut.
    CHECK(scheduled->features().at(FeatureKind::machines)(0, 0) == 1);
    CHECK(completed->features().at(FeatureKind::machines)(0, 0) == 0);
    while (!d.is_complete()) d.dispatch(d.available_operations().front());
    for (auto kind : kAllFeatureKinds)
        for (double v : completed->features().at(kind).data) CHECK(v == 1);
}

TEST_CASE("earliest start times on a fresh instance") {
    Dispatcher d(furniture());
    const auto obs = earliest_start_observer(d);
    d.subscribe(*obs);
    const std::vector<Time> expected{0, 2, 4, 0, 1, 2, 0, 2, 5};
    CHECK(std::vector<Time>(obs->earliest_start_times().begin(), obs->earliest_start_times().end()) == expected);
    CHECK(column(obs->features().at(FeatureKind::operations)) == std::vector<double>{0, 2, 4, 0, 1, 2, 0, 2, 5});
    CHECK(column(obs->features().at(FeatureKind::machines)) == std::vector<double>{0, 1, 2});
    CHECK(column(obs->features().at(FeatureKind::jobs)) == std::vector<double>{0, 0, 0});
}

TEST_CASE("earliest start after a dispatch matches the scratch oracle") {
    Dispatcher d(two_job());
    const auto obs = earliest_start_observer(d);
    d.subscribe(*obs);
    d.dispatch(d.instance().operation(1, 0));
    CHECK(obs->earliest_start_times()[2] == 4);
    const auto oracle = fixtures::scratch_earliest_starts(d);
    for (const auto& op : d.instance().operations())
        if (!d.is_dispatched(op)) CHECK(obs->earliest_start_times()[static_cast<std::size_t>(op.operation_id)] == *oracle[static_cast<std::size_t>(op.operation_id)]);
}

TEST_CASE("incremental earliest start equals the oracle on random episodes") {
    for (const auto* filter : {"none", "do", "nio", "nim", "nidm"}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto inst = fixtures::random_instance(6, 6, seed * 31 + 7);
            Dispatcher d(inst, make_filter(std::string(filter)));
            const auto obs = earliest_start_observer(d);
            d.subscribe(*obs);
            const auto rule = make_rule("random", seed);
            while (!d.is_complete()) {
                d.dispatch(rule(d));
                const auto oracle = fixtures::scratch_earliest_starts(d);
                for (const auto& op : inst->operations())
                    if (!d.is_dispatched(op))
                        REQUIRE(obs->earliest_start_times()[static_cast<std::size_t>(op.operation_id)] == *oracle[static_cast<std::size_t>(op.operation_id)]);
                // The current time is the smallest relative start among available operations.
                if (!d.is_complete()) {
                    double lowest = 1e18;
                    for (const auto& op : d.available_operations())
                        lowest = std::min(lowest, obs->features().at(FeatureKind::operations)(static_cast<std::size_t>(op.operation_id), 0));
                    CHECK(lowest == 0);
                }
            }
        }
    }
}

TEST_CASE("duration features") {
    Dispatcher d(furniture());
    const auto obs = duration_observer(d);
    d.subscribe(*obs);
    CHECK(column(obs->features().at(FeatureKind::machines)) == std::vector<double>{5, 6, 6});
    CHECK(column(obs->features().at(FeatureKind::jobs)) == std::vector<double>{6, 3, 8});
    d.dispatch(d.instance().operation(2, 0));
    CHECK(obs->features().at(FeatureKind::machines)(0, 0) == 3);

    auto inst = std::make_shared<const Instance>("r", std::vector<std::vector<Time>>{{4}, {1, 1}}, std::vector<std::vector<int>>{{0}, {1, 2}});
    Dispatcher e(inst);
    const auto dur = duration_observer(e);
    e.subscribe(*dur);
    e.dispatch(inst->operation(0, 0));
    e.dispatch(inst->operation(1, 0));
    CHECK(e.current_time() == 1);
    CHECK(dur->features().at(FeatureKind::operations)(0, 0) == 3);
    CHECK(dur->features().at(FeatureKind::operations)(1, 0) == 0);
}

TEST_CASE("position and remaining operations") {
    Dispatcher d(furniture());
    const auto pos = position_in_job_observer(d);
    const auto rem = remaining_operations_observer(d);
    d.subscribe(*pos);
    d.subscribe(*rem);
    CHECK(column(pos->features().at(FeatureKind::operations)) == std::vector<double>{0, 1, 2, 0, 1, 2, 0, 1, 2});
    CHECK(column(rem->features().at(FeatureKind::machines)) == std::vector<double>{3, 3, 3});
    CHECK_FALSE(rem->features().contains(FeatureKind::operations));
    d.dispatch(d.instance().operation(0, 0));
    const auto p = column(pos->features().at(FeatureKind::operations));
    CHECK(p[1] == 0);
    CHECK(p[2] == 1);
    CHECK(column(rem->features().at(FeatureKind::jobs)) == std::vector<double>{2, 3, 3});
    CHECK(column(rem->features().at(FeatureKind::machines)) == std::vector<double>{2, 3, 3});
}

TEST_CASE("composite concatenates in registration order") {
    Dispatcher d(furniture());
    const std::vector<FeatureObserverConfig> configs{
        {FeatureObserverType::is_scheduled, {FeatureKind::operations}},
        {FeatureObserverType::earliest_start_time, {FeatureKind::operations}},
        {FeatureObserverType::duration, {FeatureKind::operations, FeatureKind::jobs}},
        {FeatureObserverType::position_in_job, {}},
    };
    CompositeFeatureObserver composite(d, configs);
    d.subscribe(composite);
    const auto features = composite.features();
    CHECK(features.at(FeatureKind::operations).cols == 4);
    CHECK(features.at(FeatureKind::jobs).cols == 1);
    CHECK(composite.column_names().at(FeatureKind::operations) ==
          std::vector<std::string>{"is_scheduled", "earliest_start_time", "duration", "position_in_job"});
    const Matrix joined = append_job_columns(d.instance(), features.at(FeatureKind::operations), features.at(FeatureKind::jobs));
    CHECK(joined.cols == 5);
    CHECK(joined(8, 4) == 8);
    CHECK(joined(8, 1) == 5);
}

TEST_CASE("composite rejects width changes") {
    Dispatcher d(furniture());
    std::vector<std::unique_ptr<FeatureObserver>> observers;
    observers.push_back(std::make_unique<GrowingObserver>(d));
    CompositeFeatureObserver composite(std::move(observers));
    d.subscribe(composite);
    CHECK_NOTHROW(composite.features());
    d.dispatch(d.instance().operation(0, 0));
    CHECK_THROWS_AS(composite.features(), WidthMismatchError);
}

TEST_CASE("unsupported kinds are rejected") {
    Dispatcher d(furniture());
    CHECK_THROWS_AS(make_feature_observer(d, {FeatureObserverType::remaining_operations, {FeatureKind::operations}}), ConfigError);
    CHECK_THROWS_AS(feature_observer_type("bogus"), ConfigError);
    CHECK(feature_observer_type("duration") == FeatureObserverType::duration);
}

TEST_CASE("normalization") {
    Matrix zero(3, 2);
    FeatureMap map{{FeatureKind::operations, zero}};
    CHECK(normalize(map).at(FeatureKind::operations) == zero);
    Matrix m(2, 2);
    m(0, 0) = 4;
    m(1, 1) = -8;
    normalize_in_place(m);
    CHECK(m(0, 0) == doctest::Approx(0.5));
    CHECK(m(1, 1) == doctest::Approx(-1.0));

    Dispatcher d(furniture());
    CompositeFeatureObserver composite(d, default_feature_configs());
    d.subscribe(composite);
    d.dispatch(d.instance().operation(2, 0));
    for (const auto& [kind, matrix] : normalize(composite.features())) {
        double largest = 0;
        for (double v : matrix.data) largest = std::max(largest, std::abs(v));
        CHECK((largest == 0 || largest == doctest::Approx(1.0)));
    }
}

TEST_CASE("reset reproduces identical feature trajectories") {
    const auto inst = fixtures::random_instance(5, 4, 3);
    Dispatcher d(inst, make_filter(std::string("do")));
    CompositeFeatureObserver composite(d, default_feature_configs());
    d.subscribe(composite);
    const auto initial = composite.features();
    std::vector<FeatureMap> first;
    std::vector<Operation> actions;
    const auto rule = make_rule("random", 11);
    while (!d.is_complete()) {
        actions.push_back(rule(d));
        d.dispatch(actions.back());
        first.push_back(composite.features());
    }
    d.reset();
    CHECK(composite.features() == initial);
    for (std::size_t k = 0; k < actions.size(); ++k) {
        d.dispatch(actions[k]);
        CHECK(composite.features() == first[k]);
    }
}

TEST_CASE("features follow job relabeling") {
    const auto inst = fixtures::random_instance(5, 4, 21);
    const int J = inst->num_jobs();
    auto durations = inst->duration_matrix();
    auto machines = inst->machine_matrix();
    std::reverse(durations.begin(), durations.end());
    std::reverse(machines.begin(), machines.end());
    auto mirrored = std::make_shared<const Instance>("mirrored", durations, machines);

    Dispatcher a(inst, make_filter(std::string("nio")));
    Dispatcher b(mirrored, make_filter(std::string("nio")));
    CompositeFeatureObserver fa(a, default_feature_configs());
    CompositeFeatureObserver fb(b, default_feature_configs());
    a.subscribe(fa);
    b.subscribe(fb);
    const auto rule = make_rule("random", 2);
    auto check_equal = [&] {
        const auto xa = fa.features();
        const auto xb = fb.features();
        CHECK(xa.at(FeatureKind::machines) == xb.at(FeatureKind::machines));
        const auto& ja = xa.at(FeatureKind::jobs);
        const auto& jb = xb.at(FeatureKind::jobs);
        for (int j = 0; j < J; ++j)
            for (std::size_t c = 0; c < ja.cols; ++c)
                CHECK(ja(static_cast<std::size_t>(j), c) == jb(static_cast<std::size_t>(J - 1 - j), c));
        const auto& oa = xa.at(FeatureKind::operations);
        const auto& ob = xb.at(FeatureKind::operations);
        for (const auto& op : inst->operations()) {
            const int other = mirrored->operation(J - 1 - op.job_id, op.position_in_job).operation_id;
            for (std::size_t c = 0; c < oa.cols; ++c)
                CHECK(oa(static_cast<std::size_t>(op.operation_id), c) == ob(static_cast<std::size_t>(other), c));
        }
    };
    check_equal();
    while (!a.is_complete()) {
        const auto op = rule(a);
        a.dispatch(op);
        b.dispatch(mirrored->operation(J - 1 - op.job_id, op.position_in_job));
        check_equal();
    }
}
