#include <doctest.h>

#include <cmath>

#include "pwlneuro/classify.hpp"
#include "pwlneuro/coeff_search.hpp"
#include "pwlneuro/neuron.hpp"
#include "pwlneuro/registry.hpp"

using namespace pwlneuro;

TEST_CASE("nullcline values at the breakpoint") {
    CHECK(nullcline_value(ModelKind::Original, {}, -62.5) == doctest::Approx(-16.25).epsilon(1e-12));
    CHECK(nullcline_value(ModelKind::Pwl2, {0.75, 20, 0}, -62.5) == doctest::Approx(-20.0));
    CHECK(nullcline_value(ModelKind::Pwl4, {0.375, 0.75, 11}, -62.5) == doctest::Approx(-16.5));
    // hand evaluation of the three-piece form: k1*2*k2 - k1*k2*k3
    CHECK(nullcline_value(ModelKind::Pwl3, {0.625, 5.8, 6.4}, -62.5)
          == doctest::Approx(0.625 * 5.8 * (2.0 - 6.4)));
    // rescaled coefficient set has its own vertex at v = -64
    CHECK(nullcline_value(ModelKind::OriginalDiscretized, {}, -64.0) == doctest::Approx(12.0));
}

TEST_CASE("derivative at the resting equilibrium is zero") {
    NeuronParams p;
    p.model = ModelKind::Original;
    p.a = 0.02;
    p.b = 0.2;
    const auto [dv, du] = derivative(p, {-70.0, -14.0}, 0.0);
    CHECK(dv == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(du == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("derivative matches the 2PWL balance point") {
    NeuronParams p;
    p.model = ModelKind::Pwl2;
    p.a = 0.02;
    p.b = 0.2;
    p.k = {0.75, 20, 0};
    const auto [dv, du] = derivative(p, {-62.5, 0.0}, 20.0);
    CHECK(dv == doctest::Approx(0.0));
    CHECK(du == doctest::Approx(0.02 * 0.2 * -62.5));
}

TEST_CASE("step applies the reset rule with spike equalization") {
    NeuronParams p; // defaults: original, tonic-spiking constants
    const NeuronState hot{31.0, 0.0};
    const StepResult r = step(p, hot, 0.0, 1e-3);
    CHECK(r.fired);
    CHECK(r.emitted_v == 30.0);
    CHECK(r.state.v == p.c);
    // u gets its Euler update first, then the d increment
    const double u_next = 0.0 + 1e-3 * p.a * (p.b * 31.0 - 0.0);
    CHECK(r.state.u == doctest::Approx(u_next + p.d));
}

TEST_CASE("step at equilibrium does not fire and keeps the state") {
    NeuronParams p;
    const StepResult r = step(p, {-70.0, -14.0}, 0.0, 0.1);
    CHECK_FALSE(r.fired);
    CHECK(r.state.v == doctest::Approx(-70.0));
    CHECK(r.state.u == doctest::Approx(-14.0));
}

TEST_CASE("step flags a divergent state") {
    NeuronParams p;
    CHECK_THROWS_AS((void)step(p, {1e308, 0.0}, 0.0, 1e6), NonFiniteError);
}

TEST_CASE("simulate with zero input from rest never spikes") {
    for (ModelKind m : {ModelKind::Original, ModelKind::Pwl2, ModelKind::Pwl4}) {
        const auto type = find_neuron_type("tonic_spiking").value();
        const NeuronParams p = type.params(m);
        const SpikeTrain t =
            simulate(p, type.initial(m), InputSignal::constant(0.0), 0.1, 5000);
        CHECK(t.count() == 0);
    }
}

TEST_CASE("reset invariant holds along a full run") {
    const auto type = find_neuron_type("tonic_spiking").value();
    const NeuronParams p = type.params(ModelKind::Original);
    NeuronState s = type.initial(ModelKind::Original);
    for (int i = 0; i < 20000; ++i) {
        const StepResult r = step(p, s, 14.0, 0.1);
        CHECK(r.state.v <= p.v_th);
        if (r.fired) {
            CHECK(r.state.v == p.c);
            CHECK(r.emitted_v == p.v_th);
        }
        s = r.state;
    }
}

TEST_CASE("spike-equalized trace holds v_th exactly at spike steps") {
    const auto type = find_neuron_type("tonic_spiking").value();
    const NeuronParams p = type.params(ModelKind::Pwl2);
    const SpikeTrain t = simulate(p, type.initial(ModelKind::Pwl2),
                                  InputSignal::constant(14.0), 0.1, 10000, true);
    REQUIRE(t.count() > 3);
    for (std::size_t s : t.spike_steps) CHECK(t.trace[s] == p.v_th);
}

TEST_CASE("determinism: identical runs produce bit-identical trains") {
    const auto type = find_neuron_type("tonic_bursting").value();
    const NeuronParams p = type.params(ModelKind::Pwl3);
    const auto a = simulate(p, type.initial(ModelKind::Pwl3), InputSignal::constant(10.0), 0.1,
                            20000, true);
    const auto b = simulate(p, type.initial(ModelKind::Pwl3), InputSignal::constant(10.0), 0.1,
                            20000, true);
    CHECK(a.spike_steps == b.spike_steps);
    CHECK(a.trace == b.trace);
}

TEST_CASE("vertex agreement: err_peak equals the nullcline distance for all rows") {
    const double vertex = nullcline_value(ModelKind::Original, {}, -62.5);
    for (const auto& t : neuron_type_registry()) {
        for (ModelKind m : {ModelKind::Pwl2, ModelKind::Pwl3, ModelKind::Pwl4}) {
            const KCoeffs& k = t.coeffs(m);
            const double direct = std::abs(nullcline_value(m, k, -62.5) - vertex);
            CHECK(err_peak(m, k) == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("slope agreement: outer-branch nullcline slopes by finite differences") {
    const double h = 1e-6;
    for (const auto& t : neuron_type_registry()) {
        for (ModelKind m : {ModelKind::Pwl2, ModelKind::Pwl3, ModelKind::Pwl4}) {
            const KCoeffs& k = t.coeffs(m);
            for (double v : {-40.0, -30.0, -10.0}) {
                const double fd =
                    (nullcline_value(m, k, v + h) - nullcline_value(m, k, v - h)) / (2 * h);
                double analytic = 0.0;
                if (m == ModelKind::Pwl2) analytic = k.k1;
                if (m == ModelKind::Pwl3) analytic = 2.0 * k.k1;
                if (m == ModelKind::Pwl4) analytic = 2.0 * k.k2 + k.k1;
                CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
                const double orig_fd = (nullcline_value(ModelKind::Original, {}, v + h)
                                        - nullcline_value(ModelKind::Original, {}, v - h))
                                       / (2 * h);
                CHECK(err_slope(m, k, v)
                      == doctest::Approx(std::abs(orig_fd - fd)).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("Euler refinement: halving dt halves spike-time deviations (order-1 convergence)") {
    // The deviation between dt and dt/2 runs shrinks in proportion to dt;
    // absolute spike times do move by more than one step, so the meaningful
    // invariant is the convergence order.
    const auto type = find_neuron_type("tonic_spiking").value();
    const NeuronParams p = type.params(ModelKind::Original);
    const auto run = [&](double dt) {
        return simulate(p, type.initial(ModelKind::Original), InputSignal::constant(14.0), dt,
                        static_cast<std::size_t>(500.0 / dt));
    };
    const SpikeTrain t1 = run(0.1), t2 = run(0.05), t3 = run(0.025);
    REQUIRE(t1.count() >= 5);
    REQUIRE(t1.count() == t2.count());
    REQUIRE(t2.count() == t3.count());
    const std::size_t last = t1.count() - 1;
    const double d12 = std::abs(t1.spike_time_ms(last) - t2.spike_time_ms(last));
    const double d23 = std::abs(t2.spike_time_ms(last) - t3.spike_time_ms(last));
    REQUIRE(d12 > 0.0);
    CHECK(d23 / d12 == doctest::Approx(0.5).epsilon(0.5));
}

TEST_CASE("registry: canonical rows are present and validated") {
    CHECK(neuron_type_registry().size() == 20);
    const auto ts = find_neuron_type("tonic_spiking");
    REQUIRE(ts.has_value());
    CHECK(ts->a == 0.02);
    CHECK(ts->d == 6);
    CHECK(ts->pwl2.k1 == 0.75);
    CHECK(ts->pwl2.k2 == 20);
    CHECK_FALSE(find_neuron_type("not_a_type").has_value());
    for (const auto& t : neuron_type_registry()) {
        CHECK(t.pwl4.k1 == 0.375);
        CHECK(t.pwl4.k2 == 0.75);
        CHECK(t.pwl4.k3 == 11);
    }
}

TEST_CASE("params validation") {
    NeuronParams p;
    p.c = 40.0; // above threshold
    CHECK_THROWS_AS(p.validate(), ConfigError);
    NeuronParams q;
    q.model = ModelKind::Pwl2;
    q.k = {0.0, 20, 0};
    CHECK_THROWS_AS(q.validate(), ConfigError);
}

TEST_CASE("classify_regime labels") {
    SpikeTrain t;
    t.dt = 1.0;
    SUBCASE("no spikes is resting") {
        CHECK(classify_regime(t, 0, 100) == Regime::Resting);
    }
    SUBCASE("fewer than three spikes cannot be labelled") {
        t.spike_steps = {10, 20};
        CHECK_THROWS_AS((void)classify_regime(t, 0, 100), WindowTooShortError);
    }
    SUBCASE("equal intervals are tonic") {
        t.spike_steps = {10, 20, 30, 40, 50};
        CHECK(classify_regime(t, 0, 100) == Regime::TonicSpiking);
    }
    SUBCASE("bimodal intervals are bursting") {
        t.spike_steps = {0, 5, 10, 15, 95, 100, 105, 110, 190, 195, 200, 205};
        CHECK(classify_regime(t, 0, 300) == Regime::Bursting);
    }
    SUBCASE("window selects the spikes considered") {
        t.spike_steps = {10, 20, 30, 40, 50, 300, 301, 330, 331, 360};
        CHECK(classify_regime(t, 0, 100) == Regime::TonicSpiking);
        CHECK(classify_regime(t, 250, 400) == Regime::Bursting);
    }
}

TEST_CASE("staircase input holds each level for its segment") {
    const InputSignal s = InputSignal::staircase({0.0, 4.5, 12.5, 19.5}, 100);
    CHECK(s.at(0) == 0.0);
    CHECK(s.at(99) == 0.0);
    CHECK(s.at(100) == 4.5);
    CHECK(s.at(399) == 19.5);
    CHECK(s.at(1000) == 19.5); // last level held
}
