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

#include "assign.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cfmimo {

const char* to_string(Alignment a) {
    switch (a) {
        case Alignment::poor: return "poor";
        case Alignment::moderate: return "moderate";
        case Alignment::good: return "good";
    }
    return "?";
}

const char* to_string(Weather w) {
    switch (w) {
        case Weather::clear: return "clear";
        case Weather::rainy: return "rainy";
        case Weather::snowy: return "snowy";
        case Weather::foggy: return "foggy";
    }
    return "?";
}

std::array<double, 4> weather_attenuations_db_per_km() { return {0.44, 0.523, 4.53, 50.0}; }

double weather_attenuation_db_per_km(Weather w) {
    return weather_attenuations_db_per_km()[static_cast<int>(w)];
}

double QpdReading::max() const { return std::max({q1, q2, q3, q4}); }

QpdReading qpd_measure(double beam_waist, double offset, double aperture_radius,
                       double incident_power, double azimuth_rad, int radial_cells,
                       int angular_cells) {
    if (beam_waist <= 0.0 || aperture_radius <= 0.0 || offset < 0.0 || incident_power < 0.0)
        throw std::invalid_argument("QPD geometry must be positive");

    const double cx = offset * std::cos(azimuth_rad);
    const double cy = offset * std::sin(azimuth_rad);
    const double density = incident_power / (M_PI * beam_waist * beam_waist);
    const double quadrant_area = M_PI * aperture_radius * aperture_radius / 4.0;

    QpdReading reading;
    double* cells[4] = {&reading.q1, &reading.q2, &reading.q3, &reading.q4};

    if (offset + aperture_radius <= beam_waist) {
        // Detector fully inside the beam.
        for (auto* q : cells) *q = density * quadrant_area;
        return reading;
    }
    if (offset >= beam_waist + aperture_radius) return reading; // beam misses entirely

    // Partial overlap: polar midpoint quadrature over each detector quadrant.
    const double dr = aperture_radius / radial_cells;
    const double dphi = (M_PI / 2.0) / angular_cells;
    for (int quad = 0; quad < 4; ++quad) {
        const double phi0 = quad * M_PI / 2.0;
        double area = 0.0;
        for (int ir = 0; ir < radial_cells; ++ir) {
            const double r = (ir + 0.5) * dr;
            const double cell = r * dr * dphi;
            for (int ia = 0; ia < angular_cells; ++ia) {
                const double phi = phi0 + (ia + 0.5) * dphi;
                const double dx = r * std::cos(phi) - cx;
                const double dy = r * std::sin(phi) - cy;
                if (dx * dx + dy * dy <= beam_waist * beam_waist) area += cell;
            }
        }
        *cells[quad] = density * area;
    }
    // Quadrant order q1..q4 counterclockwise from the +x/+y quadrant.
    return reading;
}

Alignment classify_alignment(const QpdReading& r, const AlignmentThresholds& th) {
    const double total = r.sum();
    if (total <= th.theta_zero) return Alignment::poor;
    const double qmax = r.max();
    const double others = total - qmax;
    if (qmax >= th.theta_dom * others) return Alignment::poor;
    const double q[4] = {r.q1, r.q2, r.q3, r.q4};
    bool equalish = true;
    for (int i = 0; i < 4 && equalish; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(q[i] - q[j]) > th.theta_eq * qmax) {
                equalish = false;
                break;
            }
    return equalish ? Alignment::good : Alignment::moderate;
}

double alignment_offset_ratio(Alignment a) {
    switch (a) {
        case Alignment::good: return 0.4;
        case Alignment::moderate: return 1.0;
        case Alignment::poor: return 1.4;
    }
    return 1.0;
}

AttenuationEstimate estimate_attenuation(double gamma_fso, const FsoLinkParams& link) {
    AttenuationEstimate est;
    if (!(gamma_fso > 0.0)) {
        est.capped = true;
        est.gamma_db_km = weather_attenuation_db_per_km(Weather::foggy);
        est.gamma_nat = est.gamma_db_km * std::log(10.0) / 1e4;
        return est;
    }
    const double xi = link.pointing_xi();
    const double xi2 = xi * xi;
    const double i0 = link.pointing_i0();
    const double il_geo = fso_path_loss(link).geometric;
    const double dl2 = link.log_amplitude_var();
    const double arg = xi * i0 * il_geo / (std::sqrt(xi2 + 2.0) * std::sqrt(gamma_fso));
    est.gamma_nat = std::log(arg) / link.distance + 2.0 * dl2 / link.distance;
    est.gamma_db_km = est.gamma_nat * 1e4 / std::log(10.0);
    return est;
}

Weather classify_weather_db_per_km(double gamma_db_km) {
    if (!(gamma_db_km > 0.0)) return Weather::foggy;
    const auto catalog = weather_attenuations_db_per_km();
    int best = 0;
    double best_dist = std::abs(std::log(gamma_db_km) - std::log(catalog[0]));
    for (int i = 1; i < 4; ++i) {
        const double dist = std::abs(std::log(gamma_db_km) - std::log(catalog[i]));
        if (dist < best_dist) {
            best_dist = dist;
            best = i;
        }
    }
    return static_cast<Weather>(best);
}

Weather classify_weather(const AttenuationEstimate& estimate) {
    if (estimate.capped) return Weather::foggy;
    return classify_weather_db_per_km(estimate.gamma_db_km);
}

LinkAssignment assign_fronthaul(Alignment alignment, Weather weather, double fso_quality,
                                double rf_quality) {
    LinkAssignment out; // default: optical only
    if (rf_quality <= fso_quality) return out;
    switch (alignment) {
        case Alignment::poor:
            out = {0, 1};
            break;
        case Alignment::moderate:
            if (weather == Weather::snowy || weather == Weather::foggy)
                out = {0, 1};
            else
                out = {1, 1};
            break;
        case Alignment::good:
            if (weather == Weather::snowy)
                out = {1, 1};
            else if (weather == Weather::foggy)
                out = {0, 1};
            // clear and rainy keep the default.
            break;
    }
    return out;
}

void dump_assignment_csv(std::ostream& os, const std::vector<AssignmentRow>& rows) {
    os << "ap,an,alignment,weather,eps,eps_prime\n";
    for (const auto& r : rows)
        os << r.ap << ',' << r.an << ',' << to_string(r.alignment) << ',' << to_string(r.weather)
           << ',' << r.eps << ',' << r.eps_prime << '\n';
}

} // namespace cfmimo
