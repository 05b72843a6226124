#pragma once

#include "entroflow/manifold.hpp"

namespace entroflow {

/// Entropy integrals of the flat-space Gaussian heat family at time t.
struct EuclideanEntropy {
  double entropy = 0.0;    // -integral u~ log u~
  double dirichlet = 0.0;  // integral |grad u|^2
  double w = 0.0;          // scale-dependent entropy at tau = t (identically 0)
  double y0 = 0.0;         // logarithmic entropy (t-independent)
};

/// Closed forms: entropy = (d/2) log(4 pi t) + d/2, dirichlet = d/(8t),
/// y0 = (d/2) log(pi d/2) + d/2.
EuclideanEntropy euclidean_closed(int dim, double t);

/// Same integrals by adaptive Gauss-Kronrod quadrature of the radial
/// profile; independent of the closed forms.
EuclideanEntropy euclidean_quadrature(int dim, double t, double rel_tol);

/// Decay rate of the time-adjusted shifted entropy along the flat-space
/// Gaussian family: -d/dt (adjusted) = 32 a^2 t / (d + 8 a t).
double euclidean_ya_rate(int dim, double t, double a);

/// Surface measure of the unit sphere in R^dim: 2 pi^(d/2) / Gamma(d/2).
double unit_sphere_area(int dim);

/// Periodized flat-space heat density centered at a grid vertex, sampled on
/// the torus and renormalized to unit mass.  The image sum is carried far
/// enough that the dropped tail is below 1e-40 pointwise.
ScalarField torus_heat_state_images(const DiscreteManifold& manifold,
                                    int source_vertex, double t);

}  // namespace entroflow
