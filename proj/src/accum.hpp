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

#ifndef LATNORM_SRC_ACCUM_HPP
#define LATNORM_SRC_ACCUM_HPP

#include <cmath>

namespace latnorm::detail {

// Neumaier-compensated accumulator.
struct Kahan {
    double s = 0.0;
    double c = 0.0;

    void add(double v) {
        const double t = s + v;
        if (std::abs(s) >= std::abs(v)) {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    }
    double get() const { return s + c; }
};

}  // namespace latnorm::detail

#endif  // LATNORM_SRC_ACCUM_HPP
