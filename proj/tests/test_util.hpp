// SPDX-License-Identifier: Apache-2.0
//
// cfmimo-sim — link-level simulator for cell-free massive MIMO uplink
// with hybrid RF/FSO fronthaul
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CFMIMO_TEST_UTIL_HPP
#define CFMIMO_TEST_UTIL_HPP

#include <doctest.h>

/// Relative-error Approx: |a - b| < eps * max(|a|, |b|). The default
/// doctest scale of 1 would swallow differences between tiny gains.
inline doctest::Approx approx_rel(double value, double eps) {
    return doctest::Approx(value).epsilon(eps).scale(0.0);
}

#endif
