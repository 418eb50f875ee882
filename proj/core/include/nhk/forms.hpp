#pragma once

#include <functional>

#include "nhk/diff.hpp"

namespace nhk {

using ScalarField = std::function<double(const Vec&)>;
using OneFormFn = std::function<Vec(const Vec&)>;

/// dσ(u, w) for constant coordinate vectors u, w: D_u(σ·w) − D_w(σ·u).
double exterior_derivative_oneform(const OneFormFn& sigma, const Vec& q, const Vec& u,
                                   const Vec& w, const DiffEngine& de = {});

/// Full antisymmetric matrix of dσ: entry (i, j) = ∂_i σ_j − ∂_j σ_i.
Mat exterior_derivative_matrix(const OneFormFn& sigma, const Vec& q,
                               const DiffEngine& de = {});

/// Matrix of a∧b, i.e. (a∧b)(u, w) = uᵀ M w.
Mat wedge(const Vec& a, const Vec& b);

/// (ω∧ω)(v1, v2, v3, v4) for a two-form given by its matrix.
double wedge_square(const Mat& omega, const Mat& frame4);

/// Canonical form dq∧dp on (q, p) as a matrix acting on (q, p) vectors.
Mat canonical_form(int n);

}  // namespace nhk
