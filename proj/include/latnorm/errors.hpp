// Copyright 2026 The latnorm authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LATNORM_ERRORS_HPP
#define LATNORM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace latnorm {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed user input: dimension mismatch, non-symmetric / non-PD matrix
// handed in directly, unparsable file, point not on the declared lattice.
struct ValidationError : Error {
    using Error::Error;
};

// A derived natural-parameter combination (mixture, scaled argument) left
// the positive-definite cone, so the requested quantity is undefined.
struct DomainError : Error {
    using Error::Error;
};

// Truncation radius needed for the requested eps exceeds the configured cap.
struct RadiusCapExceeded : Error {
    using Error::Error;
};

// Enumeration would produce more lattice points than the configured budget.
struct PointBudgetExceeded : Error {
    using Error::Error;
};

// Iterative solver did not reach its tolerance within the iteration budget.
struct NoConvergence : Error {
    using Error::Error;
};

// Newton system matrix is numerically singular or not finite.
struct SingularHessian : Error {
    using Error::Error;
};

// Empirical moments lie on the boundary of the moment cone (e.g. sample
// covariance singular), so no natural parameter reproduces them.
struct DegenerateSample : Error {
    using Error::Error;
};

// Rejection sampler exceeded its proposal budget without producing the
// requested number of accepted points.
struct AcceptanceStall : Error {
    using Error::Error;
};

// Hoelder exponent must satisfy alpha_h > 1 so the conjugate exists.
struct ConjugateExponentError : Error {
    using Error::Error;
};

// Root bracketing failed: the objective has the same sign at both ends.
struct NoSignChange : Error {
    using Error::Error;
};

// Brute-force box summation cannot certify its own tail: the outermost
// shell still carries too much relative mass.
struct TailTooFat : Error {
    using Error::Error;
};

}  // namespace latnorm

#endif  // LATNORM_ERRORS_HPP
