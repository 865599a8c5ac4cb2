// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Everything here runs against the default benchmark potential
// (lambda = 6, a = 1) in units where hbar = 2m = 1.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qdecay/basis.hpp"
#include "qdecay/delta_shell.hpp"
#include "qdecay/quadrature.hpp"
#include "qdecay/single_particle.hpp"
#include "qdecay/spectral_oracle.hpp"
#include "qdecay/tail_fit.hpp"
#include "qdecay/two_particle.hpp"

using qdecay::cplx;
using qdecay::InitialState;
using qdecay::ShellPotential;
using qdecay::SingleParticleEvolution;
using qdecay::TwoBodyState;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool ok,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", idx,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

const ShellPotential kPot(6.0, 1.0);
const cplx kKappa1(2.7579383212949247, -0.1404327324662333);
const double kGamma1 = 1.549219257731131;
const double kTau1 = 1.0 / kGamma1;  // lifetime, ~0.6455

// 1. Pole solver: residuals, ordering, and the frozen leading pole.
void criterion_pole_solver() {
  const auto set = qdecay::find_poles(kPot, 50);
  double worst = 0.0;
  bool ordered = true;
  double prev = 0.0;
  for (const auto& p : set.poles) {
    worst = std::max(worst,
                     std::abs(qdecay::pole_equation_residual(kPot, p.kappa)));
    if (!(p.kappa.real() > prev && p.kappa.imag() < 0.0)) ordered = false;
    prev = p.kappa.real();
  }
  const double fix = std::abs(set.poles[0].kappa - kKappa1);
  report(1, "pole table: residuals, fourth-quadrant ordering, frozen kappa_1",
         worst <= 1e-10 * kPot.lambda && ordered && fix < 1e-12,
         "max residual " + fmt(worst) + ", |dkappa_1| " + fmt(fix));
}

// 2. Closed-form normalization against the resonant norm identity.
void criterion_normalization() {
  const auto states = qdecay::normalize_all(qdecay::find_poles(kPot, 50));
  double worst = 0.0;
  for (const auto& s : states) {
    const cplx k = s.pole.kappa;
    const cplx integral = qdecay::integrate(
        [&](double r) {
          const cplx u = s.eval(r);
          return u * u;
        },
        0.0, kPot.a, 192);
    const cplx ua = s.norm_const * std::sin(k * kPot.a);
    worst = std::max(worst,
                     std::abs(integral + cplx(0, 0.5) * ua * ua / k - 1.0));
  }
  report(2, "normalization identity for the first fifty states",
         worst <= 1e-10, "max residual " + fmt(worst));
}

// 3. Expansion completeness: Re sum C_n Cbar_n -> 1.
void criterion_strength_sums() {
  const auto states = qdecay::normalize_all(qdecay::find_poles(kPot, 50));
  double worst = 0.0;
  for (int alpha : {1, 2}) {
    const auto coeffs = qdecay::build_coefficients(
        states, InitialState::box(alpha, kPot.a));
    worst = std::max(worst, std::abs(1.0 - coeffs.strength_sum()));
  }
  report(3, "strength sums for the first two box states at N = 50",
         worst <= 1e-3, "max deficit " + fmt(worst));
}

// 4. Exact split of the interior wave function.
void criterion_split_identity() {
  const auto ev =
      SingleParticleEvolution::make(kPot, InitialState::box(1, kPot.a), 40);
  std::mt19937_64 rng(9104);
  std::uniform_real_distribution<double> ur(0.0, 1.0);
  std::uniform_real_distribution<double> ult(std::log(0.01), std::log(3.0));
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double r = 0.999 * ur(rng);
    const double t = std::exp(ult(rng));
    const auto parts = ev.evolve_split(r, t);
    const cplx full = ev.evolve(r, t);
    const double scale = std::max(
        {std::abs(parts.exponential), std::abs(parts.nonexponential), 1e-300});
    worst = std::max(
        worst,
        std::abs(parts.exponential + parts.nonexponential - full) / scale);
  }
  report(4, "exponential + nonexponential parts rebuild the wave function",
         worst <= 1e-12, "max relative defect " + fmt(worst));
}

// 5. Pole expansion against the independent continuum-spectral route.
void criterion_oracle_equivalence() {
  const auto psi = InitialState::box(1, kPot.a);
  const auto ev = SingleParticleEvolution::make(kPot, psi, 60);
  const auto times = qdecay::log_time_grid(0.1 * kTau1, 10.0 * kTau1, 50);
  double worst = 0.0;
  for (double t : times) {
    const cplx spectral = qdecay::spectral_amplitude(psi, kPot, t);
    const cplx resonant = ev.survival_amplitude(t);
    worst = std::max(worst, std::abs(spectral - resonant));
  }
  report(5, "survival amplitude matches the continuum-spectral oracle",
         worst <= 1e-4, "max |diff| " + fmt(worst));
}

// 6. Exponential era: ln S(t) slope = -Gamma_1 within 2%.
void criterion_exponential_era() {
  const auto ev =
      SingleParticleEvolution::make(kPot, InitialState::box(1, kPot.a), 60);
  const int n = 40;
  std::vector<double> ts(n), ln_s(n);
  for (int i = 0; i < n; ++i) {
    ts[i] = kTau1 + (5.0 * kTau1 - kTau1) * i / (n - 1);
    ln_s[i] = std::log(ev.survival_probability(ts[i]));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += ts[i];
    sy += ln_s[i];
    sxx += ts[i] * ts[i];
    sxy += ts[i] * ln_s[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double rel = std::abs(slope + kGamma1) / kGamma1;
  report(6, "exponential-era decay rate equals Gamma_1",
         rel <= 0.02, "slope " + fmt(slope) + ", rel err " + fmt(rel));
}

// 7. Post-exponential inverse-power laws: t^-3 (one body), t^-6 (symmetric
//    pair), t^-10 (antisymmetric pair).
void criterion_power_laws() {
  const int n_poles = 100;
  bool ok = true;
  std::string detail;

  {
    const auto ev = SingleParticleEvolution::make(
        kPot, InitialState::box(1, kPot.a), n_poles);
    const auto times = qdecay::log_time_grid(50.0, 2000.0, 120);
    std::vector<double> s(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
      s[i] = ev.survival_probability(times[i]);
    const auto fit = qdecay::tail_fit(times, s, 50.0, 2000.0);
    ok = ok && std::abs(fit.slope + 3.0) <= 0.15;
    detail += "1p " + fmt(fit.slope);
  }
  {
    const auto two = TwoBodyState::entangled(kPot, 1, 2, +1, n_poles);
    const auto times = qdecay::log_time_grid(30.0, 1000.0, 100);
    std::vector<double> s(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
      s[i] = two.survival_two(times[i]).second;
    const auto fit = qdecay::tail_fit(times, s, 30.0, 1000.0);
    ok = ok && std::abs(fit.slope + 6.0) <= 0.3;
    detail += ", sym " + fmt(fit.slope);
  }
  {
    const auto two = TwoBodyState::entangled(kPot, 1, 2, -1, n_poles);
    const auto times = qdecay::log_time_grid(30.0, 1000.0, 100);
    std::vector<double> s(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
      s[i] = two.survival_two(times[i]).second;
    const auto fit = qdecay::tail_fit(times, s, 30.0, 1000.0);
    ok = ok && std::abs(fit.slope + 10.0) <= 0.5;
    detail += ", anti " + fmt(fit.slope);
  }
  report(7, "long-time survival follows t^-3 / t^-6 / t^-10", ok, detail);
}

// 8. Independent particles factorize.
void criterion_factorization() {
  const int n = 40;
  const auto two = TwoBodyState::factorized(kPot, 1, n);
  const auto one =
      SingleParticleEvolution::make(kPot, InitialState::box(1, kPot.a), n);
  double worst = 0.0;
  for (double t : qdecay::log_time_grid(0.05, 10.0, 25)) {
    const auto [a2, s2] = two.survival_two(t);
    const cplx a1 = one.survival_amplitude(t);
    worst = std::max(worst, std::abs(a2 - a1 * a1));
    worst = std::max(worst, std::abs(s2 - std::norm(a1) * std::norm(a1)));
    worst = std::max(worst, std::abs(two.nonescape_two(t) -
                                     one.nonescape_probability(t) *
                                         one.nonescape_probability(t)));
  }
  report(8, "factorized pair squares the one-body amplitudes", worst <= 1e-10,
         "max defect " + fmt(worst));
}

// 9. Exchange (anti)symmetry of the evolved pair wave function.
void criterion_exchange_symmetry() {
  std::mt19937_64 rng(9109);
  std::uniform_real_distribution<double> ur(0.0, 0.999);
  double worst = 0.0;
  for (int sign : {+1, -1}) {
    const auto two = TwoBodyState::entangled(kPot, 1, 2, sign, 30);
    for (double t : {0.0, 0.4, 3.0}) {
      for (int i = 0; i < 100; ++i) {
        const double r1 = ur(rng), r2 = ur(rng);
        const cplx f = two.evolve_two(r1, r2, t);
        const cplx g = two.evolve_two(r2, r1, t);
        worst = std::max(worst, std::abs(f - double(sign) * g) /
                                    std::max(1.0, std::abs(f)));
      }
    }
  }
  report(9, "pair wave function is exactly (anti)symmetric under exchange",
         worst <= 1e-12, "max relative defect " + fmt(worst));
}

// 10. Batch runs are deterministic: byte-identical CSV across thread counts.
void criterion_determinism() {
  namespace fs = std::filesystem;
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool ok = true;
  std::string ref1, ref2;
  for (int threads : {1, 4, 8}) {
    const fs::path dir =
        fs::temp_directory_path() / ("qdecay_acc_t" + std::to_string(threads));
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string common = " --N 30 --tmin 0.01 --tmax 100 --points 120"
                               " --threads " +
                               std::to_string(threads) + " --outdir " +
                               dir.string() + " >/dev/null";
    const std::string bin = QDECAY_CLI_BINARY;
    ok = ok && WEXITSTATUS(std::system(
                   (bin + " evolve1 --alpha 1" + common).c_str())) == 0;
    ok = ok &&
         WEXITSTATUS(std::system(
             (bin + " evolve2 --kind entangled --alpha 1 --beta 2 --sign -1" +
              common)
                 .c_str())) == 0;
    const std::string c1 = slurp(dir / "curves.csv");
    const std::string c2 = slurp(dir / "curves2.csv");
    if (threads == 1) {
      ref1 = c1;
      ref2 = c2;
    } else {
      ok = ok && c1 == ref1 && c2 == ref2;
    }
    ok = ok && !c1.empty() && !c2.empty();
  }
  report(10, "CSV output is byte-identical across 1/4/8 worker threads", ok,
         ok ? "identical" : "mismatch");
}

}  // namespace

int main() {
  criterion_pole_solver();
  criterion_normalization();
  criterion_strength_sums();
  criterion_split_identity();
  criterion_oracle_equivalence();
  criterion_exponential_era();
  criterion_power_laws();
  criterion_factorization();
  criterion_exchange_symmetry();
  criterion_determinism();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
