// Copyright 2026 The QEM Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qem/core/density_matrix.hpp"
#include "qem/core/observable.hpp"
#include "qem/core/types.hpp"

namespace qem::purify {

struct PurifiedEstimate {
    double value = 0;
    int degree = 1;
    double trace_rhoM = 1;  // Tr[rho^M], or Tr[rho_bar rho] for echo verification
    double overhead = 1;
};

/// Tr[O rho^M] / Tr[rho^M] from repeated multiplication; overhead Tr[rho^M]^-2.
PurifiedEstimate vd_expectation(const DensityMatrix &rho, const Observable &obs, int copies);

/// Tr[S_M (O rho) (x) rho (x) ... (x) rho] with S_M the cyclic shift of the M
/// copies, assembled from per-qubit transversal shifts and evaluated entrywise
/// without forming the 2^{MN} operator. Equals Tr[O rho^M]. Needs M N <= 12.
double vd_swap_check(const DensityMatrix &rho, const Observable &obs, int copies);

/// Tr[O (rho_bar rho + rho rho_bar)] / (2 Tr[rho_bar rho]); overhead
/// Tr[rho_bar rho]^-1.
PurifiedEstimate echo_verification(const DensityMatrix &rho, const DensityMatrix &rho_bar, const Observable &obs);

/// Echo verification with the time-reversed copy as noisy as the forward one.
PurifiedEstimate echo_verification(const DensityMatrix &rho, const Observable &obs);

struct McWeenyResult {
    Matrix d;
    int iterations = 0;
    bool converged = false;  // false when an eigenvalue sits at 1/2
    double residual = 0;     // ||D^2 - D||_F
};

/// D <- 3 D^2 - 2 D^3 until ||D^2 - D||_F < tol. Eigenvalues must lie in
/// [-0.1, 1.1]. An eigenvalue within 1e-10 of 1/2 is a fixed point of the map
/// and is reported with converged = false; running out of iterations throws.
McWeenyResult mcweeny(const Matrix &d, double tol = 1e-10, int max_iter = 100);

struct DominantEigen {
    double p1 = 0;
    double p2 = 0;
    Vector phi1;
};

/// Two largest eigenvalues of rho (clipped at -1e-10) and the top eigenvector.
DominantEigen dominant_eigen(const DensityMatrix &rho);

/// <phi1|O|phi1>, the value virtual distillation converges to.
double dominant_value(const DensityMatrix &rho, const Observable &obs);

/// e^{-lambda} rho0 + (1 - e^{-lambda}) I / 2^N.
DensityMatrix global_depolarized(const DensityMatrix &rho0, double lambda);

/// e^{2 M lambda} / [1 + (e^lambda - 1)^M]^2.
double vd_overhead_floor(double lambda, int copies);

/// e^{2 lambda} / [1 + (e^lambda - 1)^2].
double ev_overhead_floor(double lambda);

}  // namespace qem::purify
