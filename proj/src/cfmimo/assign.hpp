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

#ifndef CFMIMO_ASSIGN_HPP
#define CFMIMO_ASSIGN_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "channel.hpp"

namespace cfmimo {

enum class Alignment { poor, moderate, good };
enum class Weather { clear, rainy, snowy, foggy };

const char* to_string(Alignment a);
const char* to_string(Weather w);

/// Standard attenuation coefficients [dB/km] per weather condition.
std::array<double, 4> weather_attenuations_db_per_km();
double weather_attenuation_db_per_km(Weather w);

/// Intensities collected by the four quadrants of the alignment detector.
struct QpdReading {
    double q1 = 0.0, q2 = 0.0, q3 = 0.0, q4 = 0.0;

    double sum() const { return q1 + q2 + q3 + q4; }
    double max() const;
};

/// Flat-top beam of radius beam_waist displaced by `offset` meters along
/// azimuth `azimuth_rad`; each quadrant of the detector disk (radius
/// aperture_radius, quadrants split by the coordinate axes) collects
/// incident_power * overlap_area / (pi beam_waist^2). Overlaps are
/// evaluated by polar quadrature away from the trivial cases.
QpdReading qpd_measure(double beam_waist, double offset, double aperture_radius,
                       double incident_power, double azimuth_rad, int radial_cells = 256,
                       int angular_cells = 256);

/// Comparator thresholds for the qualitative beam-shape tests: a quadrant
/// dominates at theta_dom : 1, quadrants are equal within theta_eq of the
/// max, and the detector is dark below theta_zero (absolute).
struct AlignmentThresholds {
    double theta_dom = 10.0;
    double theta_eq = 0.2;
    double theta_zero = 1e-3;
};

/// poor: one dominant quadrant or a dark detector; good: all quadrants
/// equal within tolerance and lit; moderate otherwise.
Alignment classify_alignment(const QpdReading& reading, const AlignmentThresholds& thresholds);

/// Representative boresight offset ratio r_s / w_z of each alignment class
/// (band midpoints; the poor band is capped one half-band above its edge).
double alignment_offset_ratio(Alignment a);

/// Invert the estimated optical mean-square back to an attenuation
/// coefficient [natural units, 1/m]:
///   gamma_hat = (1/d) ln( xi I_0 I_l' / (sqrt(xi^2+2) sqrt(gamma_fso)) )
///               + 2 delta_l^2 / d.
/// `link` must carry the I_0 implied by the classified alignment.
/// A nonpositive logarithm argument cannot happen for positive inputs;
/// gamma_fso <= 0 is flagged as maximal attenuation via `capped`.
struct AttenuationEstimate {
    double gamma_nat = 0.0;   // 1/m
    double gamma_db_km = 0.0;
    bool capped = false;      // flagged as deepest-fade (foggy) input
};

AttenuationEstimate estimate_attenuation(double gamma_fso, const FsoLinkParams& link);

/// Nearest catalog attenuation in log distance; nonpositive or capped
/// estimates classify as foggy.
Weather classify_weather(const AttenuationEstimate& estimate);
Weather classify_weather_db_per_km(double gamma_db_km);

/// Branch enables for one fronthaul link given the classified conditions
/// and the (unit-normalized) link-quality comparison: the optical branch
/// is kept outright whenever it is at least as good as the radio one.
struct LinkAssignment {
    int eps = 1;
    int eps_prime = 0;
};

LinkAssignment assign_fronthaul(Alignment alignment, Weather weather, double fso_quality,
                                double rf_quality);

/// Per-link audit row for the assignment table dump.
struct AssignmentRow {
    int ap = 0;
    int an = 0;
    Alignment alignment = Alignment::good;
    Weather weather = Weather::clear;
    int eps = 1;
    int eps_prime = 0;
};

/// CSV dump (header + one row per link).
void dump_assignment_csv(std::ostream& os, const std::vector<AssignmentRow>& rows);

} // namespace cfmimo

#endif
