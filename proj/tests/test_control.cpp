#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "mgsim/control.hpp"
#include "mgsim/errors.hpp"

using namespace mgsim;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kW0 = 2.0 * kPi * 50.0;
constexpr double kWcTable = 0.03 * kW0;  // 9.42477796... rad/s

// |H(e^{j w ts})| of a normalized second-order section.
double discrete_mag(const SosCoeffs& c, double w, double ts) {
    const std::complex<double> z = std::polar(1.0, w * ts);
    const std::complex<double> num = c.b0 * z * z + c.b1 * z + c.b2;
    const std::complex<double> den = z * z + c.a1 * z + c.a2;
    return std::abs(num / den);
}

// |G(jw)| of the continuous resonant branch ki*s / (s^2 + 2 wc s + w0^2).
double continuous_mag(double ki, double w0, double wc, double w) {
    const std::complex<double> s{0.0, w};
    return std::abs(ki * s / (s * s + 2.0 * wc * s + w0 * w0));
}

// Single-bin DFT amplitude over the trailing `n` samples (test-local oracle).
double dft_amp(const std::vector<double>& x, double f, double fs, size_t n) {
    std::complex<double> acc{0.0, 0.0};
    const size_t n0 = x.size() - n;
    for (size_t m = 0; m < n; ++m)
        acc += x[n0 + m] * std::polar(1.0, -2.0 * kPi * f * static_cast<double>(m) / fs);
    return 2.0 * std::abs(acc) / static_cast<double>(n);
}
}  // namespace

TEST_CASE("continuous resonance peak is ki/(2 wc)") {
    // Table-level voltage gains: ki = 100, wc = 0.03 * w_nom -> 5.3052
    CHECK(continuous_mag(100.0, kW0, kWcTable, kW0) ==
          doctest::Approx(100.0 / (2.0 * kWcTable)).epsilon(1e-12));
    CHECK(100.0 / (2.0 * kWcTable) == doctest::Approx(5.3052).epsilon(1e-4));
}

TEST_CASE("discrete resonator magnitude at w0 matches the continuous peak") {
    const PrParams p{0.2, 100.0, kW0, kWcTable};
    const double ts = 1e-4;
    const SosCoeffs c = discretize_resonator(p, ts);
    const double peak = p.ki / (2.0 * p.wc);
    CHECK(discrete_mag(c, kW0, ts) == doctest::Approx(peak).epsilon(1e-3));
    // prewarping makes the match much tighter than the 0.1% requirement
    CHECK(discrete_mag(c, kW0, ts) == doctest::Approx(peak).epsilon(1e-9));
}

TEST_CASE("discrete vs continuous response across the band") {
    const PrParams p{0.0, 400.0, kW0, kWcTable};
    const double ts = 1e-4;
    const double fs = 1.0 / ts;
    const SosCoeffs c = discretize_resonator(p, ts);
    const double peak = p.ki / (2.0 * p.wc);

    double max_norm_err = 0.0;   // |dH| / peak gain
    double max_rel_low = 0.0;    // pointwise, f <= fs/18 where Tustin warp stays below 1%
    for (double f = 1.0; f <= fs / 10.0; f *= 1.02) {
        const double hd = discrete_mag(c, 2.0 * kPi * f, ts);
        const double hc = continuous_mag(p.ki, p.w0, p.wc, 2.0 * kPi * f);
        max_norm_err = std::max(max_norm_err, std::fabs(hd - hc) / peak);
        if (f <= fs / 19.0) max_rel_low = std::max(max_rel_low, std::fabs(hd - hc) / hc);
    }
    CHECK(max_norm_err < 0.01);
    CHECK(max_rel_low < 0.01);
}

TEST_CASE("ki = 0 gives an all-zero section") {
    const SosCoeffs c = discretize_resonator({1.0, 0.0, kW0, kWcTable}, 1e-4);
    CHECK(c.b0 == 0.0);
    CHECK(c.b1 == 0.0);
    CHECK(c.b2 == 0.0);
    ResonatorState s;
    for (int i = 0; i < 100; ++i) CHECK(s.step(c, 3.7) == 0.0);
}

TEST_CASE("discretize_resonator rejects aliasing resonant frequencies") {
    CHECK_THROWS_AS(discretize_resonator({0.1, 10.0, kW0, 1.0}, 0.02), ConfigError);
    CHECK_THROWS_AS(discretize_resonator({0.1, 10.0, kW0, 1.0}, -1.0), ConfigError);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate(PrParams{-0.1, 1.0, kW0, 1.0}), ConfigError);
    CHECK_THROWS_AS(validate(PrParams{0.1, -1.0, kW0, 1.0}), ConfigError);
    CHECK_THROWS_AS(validate(PrParams{0.1, 1.0, 0.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(validate(PrParams{0.1, 1.0, kW0, 0.0}), ConfigError);
    CHECK_THROWS_AS(validate(PrParams{0.1, 1.0, kW0, kW0}), ConfigError);  // wc < w0
    CHECK_THROWS_AS(validate(PiParams{-1.0, 0.0}), ConfigError);
    CHECK_THROWS_AS(validate(HarmonicCompParams{{1, 1.0}}, kW0, 1e-4), ConfigError);
    CHECK_THROWS_AS(validate(HarmonicCompParams{{5, 1.0}, {5, 2.0}}, kW0, 1e-4), ConfigError);
    CHECK_THROWS_AS(validate(HarmonicCompParams{{120, 1.0}}, kW0, 1e-4), ConfigError);
}

TEST_CASE("pr_step: zero error, zero state stays zero") {
    const PrParams p{0.2, 100.0, kW0, kWcTable};
    ResonatorState s;
    CHECK(pr_step(s, 0.0, p, 1e-4) == 0.0);
    CHECK(s.x1 == 0.0);
    CHECK(s.x2 == 0.0);
}

TEST_CASE("pr_step rejects DC asymptotically (|G(j0)| = 0)") {
    const PrParams p{0.2, 100.0, kW0, kWcTable};
    const double ts = 1e-4;
    ResonatorState s;
    double out = 0.0;
    for (int i = 0; i < 100000; ++i) out = pr_step(s, 1.0, p, ts);
    CHECK(out == doctest::Approx(p.kp * 1.0).epsilon(1e-6));
}

TEST_CASE("pr_step steady-state gain at resonance: kp + ki/(2 wc), in phase") {
    // at w0 the resonant branch is real-positive, so amplitudes add directly
    const PrParams p{0.2, 100.0, kW0, kWcTable};
    const double ts = 1e-4, fs = 1.0 / ts;
    ResonatorState s;
    const int n_total = static_cast<int>(60.0 / 50.0 * fs);  // 60 fundamental cycles
    std::vector<double> y(static_cast<size_t>(n_total));
    for (int k = 0; k < n_total; ++k)
        y[static_cast<size_t>(k)] = pr_step(s, std::sin(kW0 * k * ts), p, ts);
    const auto window = static_cast<size_t>(10.0 / 50.0 * fs);
    const double amp = dft_amp(y, 50.0, fs, window);
    CHECK(amp == doctest::Approx(p.kp + p.ki / (2.0 * p.wc)).epsilon(0.01));
}

TEST_CASE("pi_step: trapezoidal hand evaluation") {
    const PiParams p{0.1, 3.0};
    IntegratorState s;
    CHECK(pi_step(s, 0.0, p, 1e-4) == 0.0);

    s.reset();
    const double out = pi_step(s, 1.0, p, 1e-4);
    CHECK(out == doctest::Approx(0.1 + 3.0 * (1e-4 / 2.0) * (0.0 + 1.0)).epsilon(1e-14));
    CHECK(out == doctest::Approx(0.10015).epsilon(1e-12));
}

TEST_CASE("pi_step with constant error grows without bound") {
    const PiParams p{0.1, 3.0};
    IntegratorState s;
    double out1 = 0.0, out2 = 0.0;
    for (int i = 0; i < 1000; ++i) out1 = pi_step(s, 1.0, p, 1e-4);
    for (int i = 0; i < 9000; ++i) out2 = pi_step(s, 1.0, p, 1e-4);
    CHECK(out2 > 9.0 * (out1 - 0.1));
}

TEST_CASE("pr and pi steps are linear and time-invariant") {
    const PrParams pr{0.2, 100.0, kW0, kWcTable};
    const PiParams pi{0.1, 3.0};
    const double ts = 1e-4;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double a = 1.7, b = -0.6;

    ResonatorState r1, r2, r3;
    IntegratorState i1, i2, i3;
    double max_err_pr = 0.0, max_err_pi = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double u1 = dist(rng), u2 = dist(rng);
        const double y1 = pr_step(r1, u1, pr, ts);
        const double y2 = pr_step(r2, u2, pr, ts);
        const double y3 = pr_step(r3, a * u1 + b * u2, pr, ts);
        max_err_pr = std::max(max_err_pr, std::fabs(y3 - (a * y1 + b * y2)));
        const double z1 = pi_step(i1, u1, pi, ts);
        const double z2 = pi_step(i2, u2, pi, ts);
        const double z3 = pi_step(i3, a * u1 + b * u2, pi, ts);
        max_err_pi = std::max(max_err_pi, std::fabs(z3 - (a * z1 + b * z2)));
    }
    CHECK(max_err_pr < 1e-9);
    CHECK(max_err_pi < 1e-9);
}

TEST_CASE("harmonic compensator") {
    const double ts = 1e-4;
    SUBCASE("empty list gives zero") {
        std::vector<ResonatorState> st;
        CHECK(harmonic_comp_step(st, 1.0, {}, kW0, kWcTable, ts) == 0.0);
    }
    SUBCASE("single h = 5 section peaks at 5 w0") {
        const HarmonicTerm term{5, 50.0};
        const SosCoeffs c = discretize_harmonic(term, kW0, kWcTable, ts);
        const double peak = term.ki / (2.0 * kWcTable);
        CHECK(discrete_mag(c, 5.0 * kW0, ts) == doctest::Approx(peak).epsilon(1e-3));
        // fundamental leakage well below a tenth of the peak
        CHECK(discrete_mag(c, kW0, ts) < 0.1 * peak);
    }
    SUBCASE("aliasing order rejected") {
        std::vector<ResonatorState> st;
        CHECK_THROWS_AS(harmonic_comp_step(st, 1.0, {{120, 1.0}}, kW0, kWcTable, ts),
                        ConfigError);
    }
}

TEST_CASE("stationary-frame loops") {
    const double ts = 5e-5;
    const PrParams pv{0.2, 100.0, kW0, kWcTable};

    SUBCASE("vref = vc gives zero proportional output from rest") {
        PrPair pr(pv, ts);
        const AlphaBeta out = voltage_loop_ab({10.0, -3.0}, {10.0, -3.0}, pr);
        CHECK(out.alpha == 0.0);
        CHECK(out.beta == 0.0);
    }
    SUBCASE("first-step response is (kp + b0) * step") {
        // trapezoidal feedthrough: b0 = ki K / (K^2 + 2 wc K + w0^2), K = w0/tan(w0 ts/2)
        const double K = kW0 / std::tan(0.5 * kW0 * ts);
        const double b0 = pv.ki * K / (K * K + 2.0 * pv.wc * K + kW0 * kW0);
        PrPair pr(pv, ts);
        const AlphaBeta out = voltage_loop_ab({100.0, 0.0}, {0.0, 0.0}, pr);
        CHECK(out.alpha == doctest::Approx((pv.kp + b0) * 100.0).epsilon(1e-12));
        // close to the pure proportional response, within the ki*ts/2 feedthrough
        CHECK(std::fabs(out.alpha - pv.kp * 100.0) <= 1.01 * pv.ki * ts / 2.0 * 100.0);
    }
    SUBCASE("current loop mirrors the voltage loop with its own gains") {
        const PrParams pi_gains{5.0, 400.0, kW0, kWcTable};
        const double K = kW0 / std::tan(0.5 * kW0 * ts);
        const double b0 = pi_gains.ki * K / (K * K + 2.0 * pi_gains.wc * K + kW0 * kW0);
        PrPair pr(pi_gains, ts);
        CHECK(current_loop_ab({1.0, 1.0}, {1.0, 1.0}, pr).alpha == 0.0);
        PrPair pr2(pi_gains, ts);
        const AlphaBeta out = current_loop_ab({2.0, 0.0}, {0.0, 0.0}, pr2);
        CHECK(out.alpha == doctest::Approx((pi_gains.kp + b0) * 2.0).epsilon(1e-12));
    }
    SUBCASE("zero gains leave no output") {
        PrPair pr(PrParams{0.0, 0.0, kW0, kWcTable}, ts);
        const AlphaBeta out = voltage_loop_ab({17.0, 5.0}, {-2.0, 3.0}, pr);
        CHECK(out.alpha == 0.0);
        CHECK(out.beta == 0.0);
    }
}

TEST_CASE("synchronous-frame loops") {
    const double ts = 5e-5;
    const double omega = 314.159;

    SUBCASE("all-zero inputs give zero") {
        PiPair pi({20.0, 1000.0}, ts);
        const Dq out = current_loop_dq({0, 0}, {0, 0}, {0, 0}, pi, omega, 0.003);
        CHECK(out.d == 0.0);
        CHECK(out.q == 0.0);
    }
    SUBCASE("capacitor decoupling term: omega C vd") {
        const double c_f = 4.8162e-6;
        PiPair pi({0.1, 3.0}, ts);
        const Dq vc{311.127, 0.0};
        const Dq out = voltage_loop_dq(vc, vc, {0.0, 0.0}, pi, omega, c_f);
        CHECK(out.d == doctest::Approx(0.0).scale(1.0));
        CHECK(out.q == doctest::Approx(omega * c_f * vc.d).epsilon(1e-12));
        CHECK(out.q == doctest::Approx(0.4708).epsilon(1e-3));
    }
    SUBCASE("inductor decoupling term: omega L1 id") {
        const double l1 = 0.003;
        PiPair pi({20.0, 1000.0}, ts);
        const Dq il1{2.1428, 0.0};
        const Dq out = current_loop_dq(il1, il1, {0.0, 0.0}, pi, omega, l1);
        CHECK(out.d == doctest::Approx(0.0).scale(1.0));
        CHECK(out.q == doctest::Approx(omega * l1 * il1.d).epsilon(1e-12));
        CHECK(out.q == doctest::Approx(2.0196).epsilon(1e-3));
    }
    SUBCASE("zero gains leave exactly the feedforward and decoupling terms") {
        PiPair pi({0.0, 0.0}, ts);
        const Dq vref{311.0, 0.0}, vc{305.0, 2.0}, io{2.1, -0.3};
        const double c_f = 4.8162e-6;
        const Dq out = voltage_loop_dq(vref, vc, io, pi, omega, c_f);
        CHECK(out.d == -omega * c_f * vc.q + io.d);
        CHECK(out.q == omega * c_f * vc.d + io.q);

        PiPair pi2({0.0, 0.0}, ts);
        const Dq iref{2.0, 0.0}, il1{1.5, 0.4};
        const Dq out2 = current_loop_dq(iref, il1, vc, pi2, omega, 0.003);
        CHECK(out2.d == -omega * 0.003 * il1.q + vc.d);
        CHECK(out2.q == omega * 0.003 * il1.d + vc.q);
    }
}

TEST_CASE("PrPair retuning keeps states and moves the resonance") {
    const double ts = 5e-5;
    PrPair pr(PrParams{0.0, 100.0, kW0, 0.01}, ts);
    pr.step({1.0, 0.0});
    pr.tune(kW0 - 0.3);
    CHECK(pr.params().w0 == kW0 - 0.3);
    const SosCoeffs c = discretize_resonator(pr.params(), ts);
    const double peak = pr.params().ki / (2.0 * pr.params().wc);
    CHECK(discrete_mag(c, kW0 - 0.3, ts) == doctest::Approx(peak).epsilon(1e-9));
}
