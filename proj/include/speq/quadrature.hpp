#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace speq::quad {

struct Node {
  double x;
  double w;
};

/// Gauss rule on [-1, 1] for the weight (1 - x)^a (1 + x)^b, a, b > -1.
/// Nodes and weights come from the Golub-Welsch eigenproblem.
std::vector<Node> gauss_jacobi(int n, double a, double b);

/// Fixed 20-point Gauss-Legendre rule, computed once.
const std::vector<Node>& legendre20();

/// Composite 20-point Gauss-Legendre nodes on [a, b] with `panels` equal panels.
std::vector<Node> composite_legendre(double a, double b, int panels);

/// Composite nodes on [a, b] for the weight (b - s)^alpha: Gauss-Legendre on
/// all panels but the last, and a Gauss-Jacobi panel absorbing the endpoint
/// singularity. Weights include the factor (b - s)^alpha.
std::vector<Node> composite_right_singular(double a, double b, int panels, double alpha);

/// Number of panels needed to put `nodes_needed` composite nodes on an interval.
int panels_for(double nodes_needed);

/// Adaptive Simpson on [a, b], split first into `initial_panels` pieces so
/// oscillatory integrands are not under-resolved by the first estimate.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int initial_panels = 8, int max_depth = 40);

/// Radical-inverse (Halton) coordinate of `index` in base `base`.
double halton(std::uint64_t index, int base);

/// First `count` primes, used as Halton bases.
std::vector<int> first_primes(int count);

}  // namespace speq::quad
