#include "pwlneuro/fixed_neuron.hpp"

namespace pwlneuro {

FixedModelConstants FixedModelConstants::build(const NeuronParams& p, int max_terms) {
    FixedModelConstants fc;
    fc.model = p.model;
    fc.a_plan = decompose_constant(p.a, max_terms);
    fc.b_plan = decompose_constant(p.b, max_terms);
    fc.c_reset = encode(p.c);
    fc.d_incr = encode(p.d);
    fc.v_th = encode(p.v_th);

    const double bp = -kPwlBreakpoint; // 62.5
    switch (p.model) {
    case ModelKind::Original:
        throw NotRepresentableError(
            "fixed datapath: 0.04 v^2 + 5 v has no shift-add coefficients; "
            "use original_discretized (1/32 v^2 + 4 v)");
    case ModelKind::OriginalDiscretized:
        fc.vsq_plan = decompose_constant(1.0 / 32.0, 1);
        fc.vlin_plan = decompose_constant(4.0, 1);
        fc.offset = encode(140.0);
        break;
    case ModelKind::Pwl2:
        fc.k1_plan = decompose_constant(p.k.k1, max_terms);
        fc.bp_center = encode(bp);
        fc.offset = encode(p.k.k2);
        break;
    case ModelKind::Pwl3:
        fc.k1_plan = decompose_constant(p.k.k1, max_terms);
        fc.bp_plus = encode(bp + p.k.k2);
        fc.bp_minus = encode(bp - p.k.k2);
        fc.offset = encode(p.k.k1 * p.k.k2 * p.k.k3);
        break;
    case ModelKind::Pwl4:
        fc.k1_plan = decompose_constant(p.k.k1, max_terms);
        fc.k2_plan = decompose_constant(p.k.k2, max_terms);
        fc.bp_center = encode(bp);
        fc.bp_plus = encode(bp + p.k.k3);
        fc.bp_minus = encode(bp - p.k.k3);
        fc.offset = encode(4.0 * p.k.k2 * p.k.k3);
        break;
    }
    return fc;
}

namespace {

// v-equation tree per model: returns f = nullcline(v) - u + I in Q8.12.
FixedPoint v_rate(const FixedModelConstants& fc, FixedPoint v, FixedPoint u, FixedPoint i_in,
                  bool* sat) {
    FixedPoint f;
    switch (fc.model) {
    case ModelKind::OriginalDiscretized: {
        const FixedPoint sq = fx_square(v, sat);
        const FixedPoint t1 = mul_by_plan(sq, fc.vsq_plan, sat);
        const FixedPoint t2 = mul_by_plan(v, fc.vlin_plan, sat);
        f = fx_add(t1, t2, sat);
        f = fx_add(f, fc.offset, sat); // +140
        break;
    }
    case ModelKind::Pwl2: {
        const FixedPoint t = fx_abs(fx_add(v, fc.bp_center, sat), sat);
        f = mul_by_plan(t, fc.k1_plan, sat);
        f = fx_sub(f, fc.offset, sat); // -k2
        break;
    }
    case ModelKind::Pwl3: {
        const FixedPoint t1 = fx_abs(fx_add(v, fc.bp_plus, sat), sat);
        const FixedPoint t2 = fx_abs(fx_add(v, fc.bp_minus, sat), sat);
        const FixedPoint s = fx_add(t1, t2, sat);
        f = mul_by_plan(s, fc.k1_plan, sat);
        f = fx_sub(f, fc.offset, sat); // -k1k2k3
        break;
    }
    case ModelKind::Pwl4: {
        const FixedPoint t1 = fx_abs(fx_add(v, fc.bp_plus, sat), sat);
        const FixedPoint t2 = fx_abs(fx_add(v, fc.bp_minus, sat), sat);
        const FixedPoint s = fx_add(t1, t2, sat);
        const FixedPoint m2 = mul_by_plan(s, fc.k2_plan, sat);
        const FixedPoint t3 = fx_abs(fx_add(v, fc.bp_center, sat), sat);
        const FixedPoint m1 = mul_by_plan(t3, fc.k1_plan, sat);
        f = fx_add(m2, m1, sat);
        f = fx_sub(f, fc.offset, sat); // -4k2k3
        break;
    }
    case ModelKind::Original:
        break; // unreachable, build() rejects it
    }
    f = fx_sub(f, u, sat);
    f = fx_add(f, i_in, sat);
    return f;
}

} // namespace

FixedStepResult fixed_step(const FixedModelConstants& fc, FixedNeuronState s, FixedPoint i_in) {
    bool sat = false;

    const FixedPoint f = v_rate(fc, s.v, s.u, i_in, &sat);
    const FixedPoint dv = scale_by_dt(f);
    const FixedPoint v_next = fx_add(s.v, dv, &sat);

    const FixedPoint bv = mul_by_plan(s.v, fc.b_plan, &sat);
    const FixedPoint g = fx_sub(bv, s.u, &sat);
    const FixedPoint ag = mul_by_plan(g, fc.a_plan, &sat);
    const FixedPoint du = scale_by_dt(ag);
    const FixedPoint u_next = fx_add(s.u, du, &sat);

    FixedStepResult r;
    r.saturated = sat;
    if (v_next >= fc.v_th) {
        r.fired = true;
        r.emitted_v = fc.v_th;
        r.state = FixedNeuronState{fc.c_reset, fx_add(u_next, fc.d_incr, &r.saturated)};
    } else {
        r.fired = false;
        r.emitted_v = v_next;
        r.state = FixedNeuronState{v_next, u_next};
    }
    return r;
}

FixedSimResult fixed_simulate(const FixedModelConstants& fc, FixedNeuronState state,
                              const InputSignal& input, std::size_t n_steps, bool record_trace) {
    FixedSimResult out;
    out.train.dt = kFixedDtMs;
    if (record_trace) out.train.trace.reserve(n_steps);

    for (std::size_t s = 0; s < n_steps; ++s) {
        const FixedStepResult r = fixed_step(fc, state, encode(input.at(s)));
        state = r.state;
        out.saturated = out.saturated || r.saturated;
        if (r.fired) out.train.spike_steps.push_back(s);
        if (record_trace) out.train.trace.push_back(decode(r.emitted_v));
    }
    return out;
}

} // namespace pwlneuro
