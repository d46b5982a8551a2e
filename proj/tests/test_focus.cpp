#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"

using namespace story;
using testutil::Fixture;

TEST_CASE("insert into empty focus: weights 1, nothing pushed out") {
    Fixture f;
    InstanceId wolf = f.instance({{"wolf", 1.0}});
    ViId vi = f.sv(wolf, "sneezes");
    auto report = f.insert(vi);
    CHECK(report.expelled.empty());
    CHECK(f.focus.vi_weight(vi) == 1.0);
    CHECK(f.focus.instance_weight(wolf) == 1.0);
}

TEST_CASE("consume-object impact drops the object and bars reinforcement") {
    Fixture f;
    InstanceId wolf = f.instance({{"wolf", 1.0}});
    InstanceId girl = f.instance({{"girl", 1.0}});
    ViId eats = f.svo(wolf, "eats", girl);
    f.insert(eats);
    CHECK(f.focus.instance_weight(girl) <= 0.05);
    CHECK(f.focus.consumed(girl));

    // a later VI cannot reinforce her back to 1
    ViId sees = f.svo(wolf, "sees", girl);
    f.insert(sees);
    CHECK(f.focus.instance_weight(girl) <= 0.05);

    // the next decay expels her
    auto expelled = f.focus.decay(1.0, f.world, f.params);
    bool girl_gone = false;
    for (const auto& e : expelled)
        if (e.is_instance && e.raw_id == girl.v) girl_gone = true;
    CHECK(girl_gone);
}

TEST_CASE("push-out: two successive actions by the same subject") {
    Fixture f;
    f.params.push_out = 0.3;
    InstanceId wolf = f.instance({{"wolf", 1.0}});
    ViId first = f.sv(wolf, "sneezes");
    ViId second = f.sv(wolf, "exists");
    f.insert(first);
    f.insert(second);
    CHECK(f.focus.vi_weight(first) == doctest::Approx(0.3));
    CHECK(f.focus.vi_weight(second) == 1.0);
}

TEST_CASE("push-out is keyed on the subject") {
    Fixture f;
    InstanceId wolf = f.instance({{"wolf", 1.0}});
    InstanceId girl = f.instance({{"girl", 1.0}});
    ViId by_wolf = f.sv(wolf, "sneezes");
    ViId by_girl = f.sv(girl, "exists");
    f.insert(by_wolf);
    f.insert(by_girl);
    CHECK(f.focus.vi_weight(by_wolf) == 1.0);
}

TEST_CASE("decay: dt=0 no change; halving law; negative dt rejected") {
    Fixture f;
    f.params.focus_decay = std::log(2.0);
    InstanceId wolf = f.instance({{"wolf", 1.0}});
    ViId vi = f.sv(wolf, "sneezes");
    f.insert(vi);

    auto none = f.focus.decay(0.0, f.world, f.params);
    CHECK(none.empty());
    CHECK(f.focus.vi_weight(vi) == 1.0);

    f.focus.decay(1.0, f.world, f.params);
    CHECK(f.focus.vi_weight(vi) == doctest::Approx(0.5));
    CHECK(f.focus.instance_weight(wolf) == doctest::Approx(0.5));

    CHECK_THROWS_AS(f.focus.decay(-1.0, f.world, f.params), EngineError);
}

TEST_CASE("relation VIs hold their weight while their instances remain") {
    Fixture f;
    InstanceId wolf = f.instance({{"wolf", 1.0}});
    InstanceId basket = f.instance({{"basket", 1.0}});
    ViId rel = f.relation(basket, "of", wolf);
    f.insert(rel);
    // 10 units: instances decay but stay above threshold at this rate
    f.params.focus_decay = 0.05;
    f.focus.decay(10.0, f.world, f.params);
    CHECK(f.focus.vi_weight(rel) == 1.0);
    CHECK(f.focus.instance_weight(wolf) < 1.0);
}

TEST_CASE("relation VIs leave with their instances") {
    Fixture f;
    InstanceId wolf = f.instance({{"wolf", 1.0}});
    InstanceId basket = f.instance({{"basket", 1.0}});
    ViId rel = f.relation(basket, "of", wolf);
    f.insert(rel);
    f.focus.expel_instance(wolf);
    // the cascade runs on the next threshold sweep
    auto expelled = f.focus.decay(1e-9, f.world, f.params);
    bool rel_gone = false;
    for (const auto& e : expelled)
        if (!e.is_instance && e.raw_id == rel.v) rel_gone = true;
    CHECK(rel_gone);
    CHECK_FALSE(f.focus.has_vi(rel));
}

TEST_CASE("expel: membership drops, reinsertion is a hard error") {
    Fixture f;
    InstanceId wolf = f.instance({{"wolf", 1.0}});
    ViId vi = f.sv(wolf, "sneezes");
    f.insert(vi);
    f.focus.expel_vi(vi);
    CHECK_FALSE(f.focus.has_vi(vi));
    CHECK(f.focus.tombstoned_vi(vi));
    CHECK_THROWS_AS(f.insert(vi), EngineError);

    f.focus.expel_instance(wolf);
    ViId vi2 = f.sv(wolf, "exists");
    CHECK_THROWS_AS(f.insert(vi2), EngineError);  // references an expelled instance
    CHECK_THROWS_AS(f.focus.expel_instance(wolf), EngineError);
    CHECK_THROWS_AS(f.focus.add_instance(wolf), EngineError);
}

TEST_CASE("expelled salience equals the integral of the weight trace") {
    // independent oracle: trapezoid integration of a finely logged trace
    Fixture f;
    f.params.focus_decay = 0.37;
    f.params.expel_threshold = 0.0;  // keep items alive for the whole window
    InstanceId wolf = f.instance({{"wolf", 1.0}});
    ViId vi = f.sv(wolf, "sneezes");
    f.insert(vi);

    double dt = 1e-4;
    double trapezoid = 0.0;
    double prev = f.focus.vi_weight(vi);
    for (int i = 0; i < 30000; ++i) {
        f.focus.decay(dt, f.world, f.params);
        double cur = f.focus.vi_weight(vi);
        trapezoid += 0.5 * (prev + cur) * dt;
        prev = cur;
    }
    ExpelledItem item = f.focus.expel_vi(vi);
    CHECK(item.salience == doctest::Approx(trapezoid).epsilon(1e-6));
}

TEST_CASE("salience accumulation is nondecreasing while in focus") {
    Fixture f;
    f.params.expel_threshold = 0.0;
    InstanceId wolf = f.instance({{"wolf", 1.0}});
    ViId vi = f.sv(wolf, "sneezes");
    f.insert(vi);
    double last = 0.0;
    for (int i = 0; i < 50; ++i) {
        f.focus.decay(0.5, f.world, f.params);
        double s = f.focus.vi_salience(vi);
        CHECK(s >= last);
        last = s;
    }
}

TEST_CASE("no-return fuzz: tombstoned ids never re-enter (small)") {
    std::mt19937 rng(99);
    for (int run = 0; run < 50; ++run) {
        Fixture f;
        std::vector<InstanceId> insts;
        std::vector<ViId> vis;
        std::set<std::uint64_t> seen_tomb_inst, seen_tomb_vi;
        for (int step = 0; step < 60; ++step) {
            int op = rng() % 4;
            try {
                if (op == 0 || insts.size() < 2) {
                    insts.push_back(f.instance({{"wolf", 1.0}}));
                } else if (op == 1) {
                    InstanceId s = insts[rng() % insts.size()];
                    InstanceId o = insts[rng() % insts.size()];
                    ViId vi = rng() % 2 ? f.sv(s, "sneezes") : f.svo(s, "sees", o);
                    vis.push_back(vi);
                    f.insert(vi);
                } else if (op == 2) {
                    f.focus.decay((rng() % 30) / 10.0, f.world, f.params);
                } else if (!vis.empty()) {
                    ViId vi = vis[rng() % vis.size()];
                    if (f.focus.has_vi(vi)) f.focus.expel_vi(vi);
                }
            } catch (const EngineError&) {
                // expected on tombstone touches; state must stay consistent
            }
            for (const auto& [id, w] : f.focus.instance_weights()) {
                CHECK(w > 0.0);
                CHECK(w <= 1.0);
                CHECK_FALSE(f.focus.tombstoned_instance(id));
                CHECK_FALSE(seen_tomb_inst.count(id.v));
            }
            for (const auto& [id, w] : f.focus.vi_weights()) {
                CHECK(w > 0.0);
                CHECK(w <= 1.0);
                CHECK_FALSE(f.focus.tombstoned_vi(id));
                CHECK_FALSE(seen_tomb_vi.count(id.v));
            }
            for (InstanceId id : insts)
                if (f.focus.tombstoned_instance(id)) seen_tomb_inst.insert(id.v);
            for (ViId id : vis)
                if (f.focus.tombstoned_vi(id)) seen_tomb_vi.insert(id.v);
        }
    }
}
