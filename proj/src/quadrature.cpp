#include "speq/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "speq/error.hpp"

namespace speq::quad {

std::vector<Node> gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw ParameterError("gauss_jacobi: need at least one node");
  if (a <= -1.0 || b <= -1.0) throw ParameterError("gauss_jacobi: exponents must exceed -1");

  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    jacobi(k, k) = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k >= 1) {
      const double kk = k;
      const double num = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab);
      const double den = s * s * (s + 1.0) * (s - 1.0);
      const double off = std::sqrt(num / den);
      jacobi(k, k - 1) = off;
      jacobi(k - 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
  std::vector<Node> rule(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    rule[i] = {solver.eigenvalues()(i), mu0 * v0 * v0};
  }
  std::sort(rule.begin(), rule.end(), [](const Node& l, const Node& r) { return l.x < r.x; });
  return rule;
}

const std::vector<Node>& legendre20() {
  static const std::vector<Node> rule = gauss_jacobi(20, 0.0, 0.0);
  return rule;
}

int panels_for(double nodes_needed) {
  const double p = std::ceil(nodes_needed / 20.0);
  return static_cast<int>(std::clamp(p, 1.0, 1.0e7));
}

std::vector<Node> composite_legendre(double a, double b, int panels) {
  const auto& rule = legendre20();
  std::vector<Node> out;
  out.reserve(static_cast<std::size_t>(panels) * rule.size());
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (const auto& nd : rule) out.push_back({lo + 0.5 * h * (nd.x + 1.0), 0.5 * h * nd.w});
  }
  return out;
}

std::vector<Node> composite_right_singular(double a, double b, int panels, double alpha) {
  const double h = (b - a) / panels;
  std::vector<Node> out;
  if (panels > 1) {
    out = composite_legendre(a, b - h, panels - 1);
    for (auto& nd : out) nd.w *= std::pow(b - nd.x, alpha);
  }
  // Last panel: s = b - h (1 - x) / 2, (b - s)^alpha = (h/2)^alpha (1 - x)^alpha.
  const auto jac = gauss_jacobi(20, alpha, 0.0);
  const double scale = std::pow(0.5 * h, alpha + 1.0);
  for (const auto& nd : jac) out.push_back({b - 0.5 * h * (1.0 - nd.x), scale * nd.w});
  return out;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int initial_panels, int max_depth) {
  if (b == a) return 0.0;
  initial_panels = std::max(1, initial_panels);
  const double h = (b - a) / initial_panels;
  double total = 0.0;
  for (int p = 0; p < initial_panels; ++p) {
    const double lo = a + p * h;
    const double hi = (p + 1 == initial_panels) ? b : lo + h;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    total += simpson_step(f, lo, hi, flo, fm, fhi, whole, abs_tol / initial_panels, max_depth);
  }
  return total;
}

double halton(std::uint64_t index, int base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

std::vector<int> first_primes(int count) {
  std::vector<int> primes;
  for (int c = 2; static_cast<int>(primes.size()) < count; ++c) {
    bool prime = true;
    for (int p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

}  // namespace speq::quad
