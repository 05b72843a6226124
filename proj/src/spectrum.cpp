#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "entroflow/errors.hpp"
#include "entroflow/operators.hpp"

namespace entroflow {

namespace {

double uniform_symmetric(std::mt19937_64& rng) {
  // Raw-bit mapping to [-1, 1); library distributions differ across
  // implementations and would break cross-build reproducibility.
  const std::uint64_t bits = rng() >> 11;
  return static_cast<double>(bits) * (1.0 / 4503599627370496.0) * 2.0 - 1.0;
}

void fix_signs(Eigen::MatrixXd& fields) {
  for (int c = 0; c < fields.cols(); ++c) {
    const double big = fields.col(c).cwiseAbs().maxCoeff();
    for (int r = 0; r < fields.rows(); ++r) {
      const double x = fields(r, c);
      if (std::abs(x) > 1e-12 * big) {
        if (x < 0.0) fields.col(c) = -fields.col(c);
        break;
      }
    }
  }
}

void finish_zero_mode_bookkeeping(SpectralData& sd) {
  const int k = sd.count();
  const double scale = std::max(std::abs(sd.eigenvalues[k - 1]), 1.0);
  const double zero_tol = 1e-8 * scale;
  sd.first_nonzero_index = -1;
  for (int i = 0; i < k; ++i) {
    if (sd.eigenvalues[i] > zero_tol) {
      sd.first_nonzero_index = i;
      sd.first_nonzero = sd.eigenvalues[i];
      break;
    }
  }
  if (sd.first_nonzero_index < 0) {
    fail(ErrorCode::spectral, "no nonzero eigenvalue among the computed " +
                                  std::to_string(k) + " pairs");
  }
}

// ---------------------------------------------------------------------------
// Exact trigonometric spectrum of the uniform-grid torus Laplacian.

struct TorusMode {
  double lambda = 0.0;
  // Per axis: frequency index and flavor (0 constant, 1 cosine, 2 sine).
  std::array<int, 3> freq{{0, 0, 0}};
  std::array<int, 3> flavor{{0, 0, 0}};
};

SpectralData torus_closed_form(const LaplacianOperator& op, int k) {
  const DiscreteManifold& m = op.manifold();
  const int n = m.vertex_count();
  const int dim = m.dimension();
  const auto& res = m.resolution();

  std::vector<TorusMode> modes;
  modes.reserve(n);
  std::array<int, 3> freq{{0, 0, 0}};
  std::array<int, 3> flavor{{0, 0, 0}};
  // Depth-first enumeration of per-axis (frequency, flavor) choices.
  auto enumerate = [&](auto&& self, int axis, double lambda_acc) -> void {
    if (axis == dim) {
      TorusMode md;
      md.lambda = lambda_acc;
      md.freq = freq;
      md.flavor = flavor;
      modes.push_back(md);
      return;
    }
    const int r = res[axis];
    const double dx = m.spacing(axis);
    auto lam = [&](int j) {
      return 2.0 * (1.0 - std::cos(2.0 * M_PI * j / r)) / (dx * dx);
    };
    freq[axis] = 0;
    flavor[axis] = 0;
    self(self, axis + 1, lambda_acc);
    for (int j = 1; j <= (r - 1) / 2; ++j) {
      freq[axis] = j;
      flavor[axis] = 1;
      self(self, axis + 1, lambda_acc + lam(j));
      flavor[axis] = 2;
      self(self, axis + 1, lambda_acc + lam(j));
    }
    if (r % 2 == 0) {
      freq[axis] = r / 2;
      flavor[axis] = 1;  // alternating +-1 mode; its sine partner vanishes
      self(self, axis + 1, lambda_acc + lam(r / 2));
    }
  };
  enumerate(enumerate, 0, 0.0);

  std::sort(modes.begin(), modes.end(),
            [](const TorusMode& a, const TorusMode& b) {
              if (a.lambda != b.lambda) return a.lambda < b.lambda;
              for (int ax = 0; ax < 3; ++ax) {
                if (a.freq[ax] != b.freq[ax]) return a.freq[ax] < b.freq[ax];
                if (a.flavor[ax] != b.flavor[ax])
                  return a.flavor[ax] < b.flavor[ax];
              }
              return false;
            });

  SpectralData sd;
  sd.measure = op.measure();
  sd.eigenvalues.resize(k);
  sd.eigenfields.resize(n, k);
  sd.first_omitted =
      k < n ? modes[k].lambda : std::numeric_limits<double>::infinity();

  // Per-axis index of every vertex, recovered once from the row-major layout.
  Eigen::MatrixXi axis_index(n, dim);
  for (int v = 0; v < n; ++v) {
    int rem = v;
    for (int a = dim - 1; a >= 0; --a) {
      axis_index(v, a) = rem % res[a];
      rem /= res[a];
    }
  }

  const double cell = m.mu()[0];
  std::vector<double> table;  // per-axis sampled factor values
  for (int c = 0; c < k; ++c) {
    const TorusMode& md = modes[c];
    double norm_sq = cell;
    std::array<std::vector<double>, 3> factors;
    for (int a = 0; a < dim; ++a) {
      const int r = res[a];
      table.assign(r, 1.0);
      double s = 0.0;
      for (int i = 0; i < r; ++i) {
        const double theta = 2.0 * M_PI * md.freq[a] * i / r;
        double val = 1.0;
        if (md.flavor[a] == 1) val = std::cos(theta);
        if (md.flavor[a] == 2) val = std::sin(theta);
        table[i] = val;
        s += val * val;
      }
      norm_sq *= s;
      factors[a] = table;
    }
    const double scale = 1.0 / std::sqrt(norm_sq);
    sd.eigenvalues[c] = md.lambda;
    for (int v = 0; v < n; ++v) {
      double val = scale;
      for (int a = 0; a < dim; ++a) val *= factors[a][axis_index(v, a)];
      sd.eigenfields(v, c) = val;
    }
  }
  fix_signs(sd.eigenfields);
  finish_zero_mode_bookkeeping(sd);
  return sd;
}

// ---------------------------------------------------------------------------
// Shift-invert block Lanczos with full reorthogonalization on the
// symmetrized pencil B = D^{-1/2} S D^{-1/2}.  The block recurrence (block
// width above the largest exact multiplicity of the model spectra) is what
// lets repeated eigenvalues surface with all their copies; an inertia probe
// on a shifted factorization double-checks that no copy below the computed
// window was skipped.

void reorthogonalize(const Eigen::MatrixXd& basis, int cols,
                     Eigen::Ref<Eigen::MatrixXd> w) {
  if (cols <= 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::MatrixXd coeffs = basis.leftCols(cols).transpose() * w;
    w.noalias() -= basis.leftCols(cols) * coeffs;
  }
}

Eigen::VectorXd seeded_unit_vector(int n, std::mt19937_64& rng,
                                   const Eigen::MatrixXd& basis, int cols) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    Eigen::MatrixXd v(n, 1);
    for (int i = 0; i < n; ++i) v(i, 0) = uniform_symmetric(rng);
    reorthogonalize(basis, cols, v);
    const double norm = v.col(0).norm();
    if (norm > 1e-8 * std::sqrt(static_cast<double>(n))) {
      return v.col(0) / norm;
    }
  }
  fail(ErrorCode::spectral, "failed to draw an independent start vector");
}

int count_eigenvalues_below(const Eigen::SparseMatrix<double>& b,
                            double tau) {
  Eigen::SparseMatrix<double> probe = b;
  for (int i = 0; i < probe.rows(); ++i) probe.coeffRef(i, i) -= tau;
  probe.makeCompressed();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  ldlt.compute(probe);
  if (ldlt.info() != Eigen::Success) return -1;
  const Eigen::VectorXd d = ldlt.vectorD();
  int negatives = 0;
  for (int i = 0; i < d.size(); ++i) {
    if (d[i] < 0.0) ++negatives;
  }
  return negatives;
}

SpectralData lanczos_spectrum(const LaplacianOperator& op, int k,
                              const EigOptions& options) {
  const int n = op.size();
  const Eigen::VectorXd& mass = op.mass();
  Eigen::VectorXd inv_sqrt_d(n);
  for (int i = 0; i < n; ++i) {
    if (!(mass[i] > 0.0)) {
      fail(ErrorCode::spectral,
           "nonpositive mass weight at vertex " + std::to_string(i));
    }
    inv_sqrt_d[i] = 1.0 / std::sqrt(mass[i]);
  }

  Eigen::SparseMatrix<double> b = op.stiffness();
  for (int c = 0; c < b.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(b, c); it; ++it) {
      it.valueRef() *= inv_sqrt_d[it.row()] * inv_sqrt_d[it.col()];
    }
  }
  double diag_mean = 0.0;
  double diag_max = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = b.coeff(i, i);
    diag_mean += d;
    diag_max = std::max(diag_max, d);
  }
  diag_mean /= n;
  const double sigma = -std::max(1e-3 * diag_mean, 1e-12);

  Eigen::SparseMatrix<double> shifted = b;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
  shifted.makeCompressed();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(shifted);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::spectral, "factorization of the shifted operator failed");
  }

  std::mt19937_64 rng(options.seed);
  const int block = std::min(8, n);
  auto round_subspace = [&](int target) {
    target = std::max(target, std::min(n, k + 2));
    if (target >= n) return n;
    return std::min(n, ((target + block - 1) / block) * block);
  };
  int m = round_subspace(options.max_subspace > 0
                             ? options.max_subspace
                             : std::max(2 * k + 32, k + 48));

  // basis holds one block beyond the extraction window so a later growth
  // round can resume the recurrence where it stopped.
  Eigen::MatrixXd basis(n, std::min(n, m + block));
  Eigen::MatrixXd t_mat =
      Eigen::MatrixXd::Zero(std::min(n, m + block), std::min(n, m + block));
  int done = 0;  // completed basis columns with t_mat entries
  int ready = std::min({block, m, n});  // orthonormal columns available
  for (int c = 0; c < ready; ++c) {
    basis.col(c) = seeded_unit_vector(n, rng, basis, c);
  }

  SpectralData sd;
  sd.measure = op.measure();

  while (true) {
    const int alloc = std::min(n, m + block);
    if (t_mat.rows() < alloc) {
      Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(alloc, alloc);
      grown.topLeftCorner(t_mat.rows(), t_mat.cols()) = t_mat;
      t_mat = std::move(grown);
      basis.conservativeResize(Eigen::NoChange, alloc);
    }

    while (done < m) {
      const int width = ready - done;
      const int next_width = std::min(block, n - ready);
      Eigen::MatrixXd w = solver.solve(basis.middleCols(done, width));
      // Record the exact projection of the inverted operator onto every
      // basis column built so far.  A tridiagonal shortcut would silently
      // drop the coupling a restarted direction has to older blocks.
      {
        Eigen::MatrixXd proj = basis.leftCols(ready).transpose() * w;
        t_mat.block(0, done, ready, width) = proj;
        t_mat.block(done, 0, width, done) = proj.topRows(done).transpose();
      }
      reorthogonalize(basis, ready, w);

      if (next_width > 0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(w);
        Eigen::MatrixXd r =
            qr.matrixR().topLeftCorner(width, width).triangularView<Eigen::Upper>();
        Eigen::MatrixXd q =
            qr.householderQ() * Eigen::MatrixXd::Identity(n, width);
        const double lead = std::abs(r(0, 0));
        const double rank_tol = 1e-10 * std::max(lead, 1e-300);

        const int take = std::min(next_width, width);
        for (int c = 0; c < take; ++c) {
          const int dest = ready + c;
          bool placed = false;
          if (std::abs(r(c, c)) > rank_tol) {
            Eigen::MatrixXd col = q.col(c);
            reorthogonalize(basis, dest, col);
            const double norm = col.col(0).norm();
            if (norm > 0.5) {
              basis.col(dest) = col.col(0) / norm;
              placed = true;
            }
          }
          if (!placed) {
            // Invariant subspace exhausted in this direction; restart with
            // a fresh seeded vector.
            basis.col(dest) = seeded_unit_vector(n, rng, basis, dest);
          }
        }
        if (take < width) {
          // The schedule only shrinks the block when the basis is about to
          // span the whole space, where the dropped tail is round-off.
          for (int c = take; c < width; ++c) {
            if (std::abs(r(c, c)) > 1e-6 * std::max(lead, 1e-300)) {
              fail(ErrorCode::spectral,
                   "unexpected rank in the final partial block");
            }
          }
        }
        ready += take;
      }
      done += width;
      if (done >= n) break;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(
        t_mat.topLeftCorner(done, done));
    if (tri.info() != Eigen::Success) {
      fail(ErrorCode::spectral, "projected eigensolve failed");
    }

    // Largest theta of the inverted operator <-> smallest lambda.
    sd.eigenvalues.resize(k);
    Eigen::MatrixXd z(done, k);
    for (int c = 0; c < k; ++c) {
      const double theta = tri.eigenvalues()[done - 1 - c];
      if (!(theta > 0.0)) {
        fail(ErrorCode::spectral,
             "inverted-operator Ritz value is not positive");
      }
      sd.eigenvalues[c] = sigma + 1.0 / theta;
      z.col(c) = tri.eigenvectors().col(done - 1 - c);
    }
    Eigen::MatrixXd ritz = basis.leftCols(done) * z;
    sd.eigenfields = inv_sqrt_d.asDiagonal() * ritz;

    // Residuals in the symmetrized space, gauged by the Gershgorin-order
    // operator scale so the zero mode (where both sides of the pencil
    // vanish) is judged against the spectrum width and not against itself.
    const double gauge = std::max(diag_max, 1e-300);
    double worst = 0.0;
    for (int c = 0; c < k; ++c) {
      const Eigen::VectorXd by = b * ritz.col(c);
      worst = std::max(
          worst, (by - sd.eigenvalues[c] * ritz.col(c)).norm() / gauge);
    }
    if (worst <= options.residual_tol) break;
    if (done >= n) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "eigensolver stalled at full subspace, residual %.3e "
                    "(tolerance %.3e)",
                    worst, options.residual_tol);
      fail(ErrorCode::spectral, buf);
    }
    m = round_subspace(m + std::max(k / 2, 64));
  }

  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return sd.eigenvalues[x] < sd.eigenvalues[y];
  });
  Eigen::VectorXd ev(k);
  Eigen::MatrixXd ef(n, k);
  for (int i = 0; i < k; ++i) {
    ev[i] = sd.eigenvalues[order[i]];
    ef.col(i) = sd.eigenfields.col(order[i]);
  }
  sd.eigenvalues = std::move(ev);
  sd.eigenfields = std::move(ef);
  sd.first_omitted =
      k < n ? sd.eigenvalues[k - 1] : std::numeric_limits<double>::infinity();

  if (k < n) {
    // Inertia probe: the eigenvalue count below a genuine spectral gap must
    // match, otherwise a multiplet copy was skipped.
    int gap_at = -1;
    double gap_size = 0.0;
    for (int j = std::max(0, k - 9); j + 1 < k; ++j) {
      const double g = sd.eigenvalues[j + 1] - sd.eigenvalues[j];
      if (g >= gap_size) {
        gap_size = g;
        gap_at = j;
      }
    }
    const double scale = std::max(std::abs(sd.eigenvalues[k - 1]), 1.0);
    if (gap_at >= 0 && gap_size > 1e-7 * scale) {
      const double tau =
          0.5 * (sd.eigenvalues[gap_at] + sd.eigenvalues[gap_at + 1]);
      const int below = count_eigenvalues_below(b, tau);
      if (below >= 0 && below != gap_at + 1) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "spectrum slice mismatch: %d eigenvalues below %.6g, "
                      "computed %d",
                      below, tau, gap_at + 1);
        fail(ErrorCode::spectral, buf);
      }
    }
  }

  fix_signs(sd.eigenfields);
  finish_zero_mode_bookkeeping(sd);
  return sd;
}

}  // namespace

SpectralData low_spectrum(const LaplacianOperator& op, int k,
                          const EigOptions& options) {
  const int n = op.size();
  if (k < 2 || k > n) {
    fail(ErrorCode::spectral, "requested " + std::to_string(k) +
                                  " eigenpairs on " + std::to_string(n) +
                                  " vertices");
  }
  const DiscreteManifold& m = op.manifold();
  const bool uniform_torus =
      m.topology() == Topology::flat_torus && op.measure() == Measure::mu;
  if (uniform_torus && 4 * k > n) {
    return torus_closed_form(op, k);
  }
  return lanczos_spectrum(op, k, options);
}

}  // namespace entroflow
