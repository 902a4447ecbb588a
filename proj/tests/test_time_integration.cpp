#include <cmath>
#include <cstdio>
#include <vector>

#include "doctest.h"
#include "ksns/operators.hpp"
#include "ksns/state.hpp"
#include "ksns/timeint.hpp"
#include "oracles.hpp"

using namespace ksns;

namespace {

double max_coef(const SpectralField& f) {
    double m = 0.0;
    for (const auto& z : f.data()) m = std::max(m, std::abs(z));
    return m;
}

SimState make_state(const Grid& g, FlowVariant v) {
    SimState s;
    s.params.grid = g;
    s.flow.variant = v;
    if (v == FlowVariant::NavierStokes) s.flow.omega = SpectralField(g, BasisTag::SinY);
    s.density = Density(SpectralField(g, BasisTag::CosY));
    return s;
}

}  // namespace

TEST_CASE("constant state is a fixed point") {
    const Grid g(16, 9);
    for (Scheme sc : {Scheme::ImexEuler, Scheme::ImexCNAB2})
        for (FlowVariant v : {FlowVariant::NoFlow, FlowVariant::StaticStokes,
                              FlowVariant::NavierStokes}) {
            SimState s = make_state(g, v);
            s.density.field.coef(0, 0) = 2.5;
            Integrator integ(s, StepController{1e-3, 1e-7, 1e-2, 0.4, sc});
            for (int i = 0; i < 5; ++i) integ.step(1e-3);
            SpectralField diff = integ.state().density.field;
            diff.coef(0, 0) -= 2.5;
            CHECK(max_coef(diff) < 1e-14);
            if (v == FlowVariant::NavierStokes) CHECK(max_coef(*integ.state().flow.omega) < 1e-14);
            CHECK(integ.state().t == doctest::Approx(5e-3));
        }
}

TEST_CASE("heat decay: implicit factor on a tiny mean-zero mode") {
    // with rho_m = 0 and amplitude eps, the explicit terms are O(eps^2), so
    // an Euler step multiplies mode (1,1) by 1/(1+2dt) up to relative eps
    const Grid g(16, 9);
    const double eps = 1e-10, dt = 1e-2;
    SimState s = make_state(g, FlowVariant::NoFlow);
    s.density.field.coef(1, 1) = eps;
    Integrator integ(s, StepController{dt, 1e-7, 1e-1, 0.4, Scheme::ImexEuler});
    integ.step(dt);
    const double ratio = integ.state().density.field.coef(1, 1).real() / eps;
    CHECK(ratio == doctest::Approx(1.0 / (1.0 + 2.0 * dt)).epsilon(1e-9));
    integ.step(dt);
    const double ratio2 = integ.state().density.field.coef(1, 1).real() / eps;
    CHECK(ratio2 == doctest::Approx(std::pow(1.0 + 2.0 * dt, -2.0)).epsilon(1e-9));
}

TEST_CASE("CNAB2 self-convergence order on the full system") {
    const Grid g(32, 17);
    auto run = [&](double dt, Scheme sc) {
        SimState s = make_state(g, FlowVariant::StaticStokes);
        s.params.g = 5.0;
        s.density.field.coef(0, 0) = 1.5;
        s.density.field.coef(1, 1) = 0.1;
        s.density.field.coef(0, 2) = 0.05;
        Integrator integ(s, StepController{dt, 1e-9, 1.0, 0.4, sc});
        const double t_end = 0.5;
        const int n = static_cast<int>(std::round(t_end / dt));
        for (int i = 0; i < n; ++i) integ.step(dt);
        return integ.state().density.field;
    };
    const SpectralField ref = run(1.5625e-4, Scheme::ImexCNAB2);
    std::vector<double> errs;
    for (double dt : {1e-2, 5e-3, 2.5e-3})
        errs.push_back(std::sqrt(l2_norm_sq(run(dt, Scheme::ImexCNAB2) - ref)));
    const double p1 = std::log2(errs[0] / errs[1]);
    const double p2 = std::log2(errs[1] / errs[2]);
    CHECK(p1 >= 1.8);
    CHECK(p2 >= 1.8);
}

TEST_CASE("mass is conserved structurally") {
    const Grid g(16, 9);
    SimState s = make_state(g, FlowVariant::StaticStokes);
    s.params.g = 10.0;
    SpectralField r = dealias(oracle::random_field(g, BasisTag::CosY, 3));
    r *= 0.05;
    r.coef(0, 0) = 2.0;
    s.density = Density(r);
    Integrator integ(s, StepController{1e-3, 1e-7, 1e-2, 0.4, Scheme::ImexCNAB2});
    for (int i = 0; i < 200; ++i) integ.step(1e-3);
    CHECK(std::abs(mean(integ.state().density) - 2.0) < 1e-13);
}

TEST_CASE("choose_dt") {
    const Grid g(16, 9);
    SimState s = make_state(g, FlowVariant::NoFlow);
    s.density.field.coef(0, 0) = 1.0;
    StepController ctrl{1e-3, 1e-7, 1e-2, 0.4, Scheme::ImexEuler};
    CHECK(choose_dt(s, ctrl) == ctrl.dt_max);  // quiescent: no constraint binds

    // NS with a given vorticity: doubling the velocity halves dt when the
    // CFL constraint binds and no clamp is active
    SimState sn = make_state(g, FlowVariant::NavierStokes);
    sn.density.field.coef(0, 0) = 1.0;
    sn.flow.omega->coef(1, 1) = complex{0.0, -50.0};
    ctrl.dt_max = 1.0;
    const double dt1 = choose_dt(sn, ctrl);
    sn.flow.omega->coef(1, 1) = complex{0.0, -100.0};
    const double dt2 = choose_dt(sn, ctrl);
    CHECK(dt2 == doctest::Approx(dt1 / 2.0).epsilon(1e-12));
    CHECK(dt1 < 1.0);
    CHECK(dt1 > ctrl.dt_min);

    // clamping at dt_min
    sn.flow.omega->coef(1, 1) = complex{0.0, -1e12};
    CHECK(choose_dt(sn, ctrl) == ctrl.dt_min);
}

TEST_CASE("detect") {
    const Grid g(24, 12);
    SimState s = make_state(g, FlowVariant::NoFlow);
    s.density.field.coef(0, 0) = 1.0;
    CHECK(!detect(s, s.params).has_value());

    // all fluctuation energy in the outermost retained modes
    SimState st = make_state(g, FlowVariant::NoFlow);
    st.density.field.coef(0, 0) = 1.0;
    st.density.field.coef(g.n1 / 3, 0) = 0.5;
    const auto tail = detect(st, st.params);
    REQUIRE(tail.has_value());
    CHECK(tail->kind == RunOutcome::Kind::ResolutionLoss);
    CHECK(tail->metric == "tail_frac");

    // sup-norm blowup wins over resolution loss
    SimState sb = make_state(g, FlowVariant::NoFlow);
    sb.density.field.coef(g.n1 / 3, 0) = 1e7;
    const auto blow = detect(sb, sb.params);
    REQUIRE(blow.has_value());
    CHECK(blow->kind == RunOutcome::Kind::BlowupDetected);
    CHECK(blow->metric == "rho_inf");

    SimState snan = make_state(g, FlowVariant::NoFlow);
    snan.density.field.coef(1, 1) = std::nan("");
    const auto nf = detect(snan, snan.params);
    REQUIRE(nf.has_value());
    CHECK(nf->kind == RunOutcome::Kind::BlowupDetected);
}

TEST_CASE("BlowupDetector dt-pinning branch") {
    const Grid g(16, 9);
    SimState s = make_state(g, FlowVariant::NoFlow);
    s.params.dt_pin_steps = 5;
    BlowupDetector det;
    // growing fluctuation energy with dt pinned at dt_min
    for (int i = 0; i < 10; ++i) {
        s.density.field.coef(1, 1) = 0.1 * (i + 1);
        const auto out = det.update(s, s.params.dt_min, /*dt_pinned=*/true);
        if (i < 5) {
            CHECK(!out.has_value());
        } else {
            REQUIRE(out.has_value());
            CHECK(out->kind == RunOutcome::Kind::BlowupDetected);
            CHECK(out->metric == "dt");
            break;
        }
    }

    // unpinned steps reset the count
    BlowupDetector det2;
    SimState s2 = make_state(g, FlowVariant::NoFlow);
    for (int i = 0; i < 20; ++i) {
        s2.density.field.coef(1, 1) = 0.1 * (i + 1);
        const bool pinned = (i % 3 != 2);
        CHECK(!det2.update(s2, s2.params.dt_min, pinned).has_value());
    }
}

TEST_CASE("checkpoint round trip") {
    const Grid g(16, 9);
    SimState s = make_state(g, FlowVariant::NavierStokes);
    s.t = 1.375;
    s.params.g = 50.0;
    s.params.B = 100.0;
    s.density = Density(oracle::random_field(g, BasisTag::CosY, 5));
    s.flow.omega = oracle::random_field(g, BasisTag::SinY, 7);

    const auto bytes = checkpoint_save(s);
    const SimState r = checkpoint_load(bytes);
    CHECK(r.t == s.t);
    CHECK(r.params.g == s.params.g);
    CHECK(r.params.B == s.params.B);
    CHECK(r.params.grid == g);
    CHECK(r.flow.variant == FlowVariant::NavierStokes);
    for (size_t i = 0; i < s.density.field.data().size(); ++i) {
        CHECK(r.density.field.data()[i] == s.density.field.data()[i]);
        CHECK(r.flow.omega->data()[i] == s.flow.omega->data()[i]);
    }

    // header layout: magic, version, n1, n2, variant
    CHECK(bytes[0] == 'K');
    CHECK(bytes[1] == 'S');
    CHECK(bytes[2] == 'N');
    CHECK(bytes[3] == 'S');
    CHECK(bytes[4] == 1);
    CHECK(bytes[5] == 16);
    CHECK(bytes[9] == 9);
    CHECK(bytes[13] == 3);  // NavierStokes
    CHECK(bytes.size() == 14 + 3 * 8 + 2 * (9 * 9 * 16));

    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_WITH_AS(static_cast<void>(checkpoint_load(bad)), "checkpoint: bad magic",
                         std::runtime_error);
    bad = bytes;
    bad[4] = 9;
    CHECK_THROWS_WITH_AS(static_cast<void>(checkpoint_load(bad)),
                         "checkpoint: unsupported version", std::runtime_error);
    bad = bytes;
    bad[13] = 7;
    CHECK_THROWS_AS(static_cast<void>(checkpoint_load(bad)), std::runtime_error);
    bad = bytes;
    bad.resize(bytes.size() - 8);
    CHECK_THROWS_WITH_AS(static_cast<void>(checkpoint_load(bad)), "checkpoint: truncated",
                         std::runtime_error);
    bad = bytes;
    bad.push_back(0);
    CHECK_THROWS_WITH_AS(static_cast<void>(checkpoint_load(bad)), "checkpoint: trailing bytes",
                         std::runtime_error);

    const std::string path = "/tmp/ksns_test_ckpt.bin";
    checkpoint_write_file(s, path);
    const SimState rf = checkpoint_read_file(path);
    CHECK(rf.t == s.t);
    for (size_t i = 0; i < s.density.field.data().size(); ++i)
        CHECK(rf.density.field.data()[i] == s.density.field.data()[i]);
    std::remove(path.c_str());
}

TEST_CASE("resume determinism (Euler)") {
    const Grid g(16, 9);
    SimState s = make_state(g, FlowVariant::NavierStokes);
    s.params.g = 5.0;
    s.params.B = 2.0;
    SpectralField r = dealias(oracle::random_field(g, BasisTag::CosY, 11));
    r *= 0.05;
    r.coef(0, 0) = 1.0;
    s.density = Density(r);
    SpectralField w = dealias(oracle::random_field(g, BasisTag::SinY, 13));
    w *= 0.05;
    s.flow.omega = w;

    const StepController ctrl{1e-3, 1e-7, 1e-2, 0.4, Scheme::ImexEuler};
    const double dt = 1e-3;

    Integrator unbroken(s, ctrl);
    for (int i = 0; i < 5; ++i) unbroken.step(dt);
    const auto bytes = checkpoint_save(unbroken.state());
    Integrator resumed(checkpoint_load(bytes), ctrl);

    for (int i = 0; i < 10; ++i) {
        unbroken.step(dt);
        resumed.step(dt);
        const SpectralField& a = unbroken.state().density.field;
        const SpectralField& b = resumed.state().density.field;
        for (size_t k = 0; k < a.data().size(); ++k)
            CHECK(std::abs(a.data()[k] - b.data()[k]) < 1e-12);
    }
}
