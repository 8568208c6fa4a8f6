// SPDX-License-Identifier: Apache-2.0
//
// nfmimo: noncoherent MIMO detection under near-field spatial correlation
// Copyright (C) 2026 The nfmimo authors
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

// Walks one UE away from a 16x16 array and prints how far the far-field
// subspace is from the true one, then a short SER comparison at 1 m.

#include <nfmimo/channel.hpp>
#include <nfmimo/geometry.hpp>
#include <nfmimo/simulation.hpp>
#include <nfmimo/subspace.hpp>

#include <cstdio>

int main()
{
    using namespace nfmimo;

    const ArrayGeometry array(16, 16, 0.01, 0.01);
    const FieldBoundaries fb = field_boundaries(array);
    std::printf("aperture %.4f m, Fresnel %.4f m, Fraunhofer %.4f m\n", fb.aperture, fb.fresnel, fb.fraunhofer);

    const SphericalPoint start = SphericalPoint::from_degrees(1.0, -30.0, -10.0);
    const SphericalPoint stop = SphericalPoint::from_degrees(200.0, -0.15, -10.0);
    const ClusterOptions options{SphereSampling::Volume, true};

    std::printf("%10s %12s\n", "range_m", "chordal");
    for (double r : {1.0, 3.0, 10.24, 30.0, 100.0, 200.0})
    {
        const SphericalPoint ue = point_on_segment_at_range(start, stop, r);
        const ScatteringCluster cluster = draw_scatterers(ue, 3.0, 10, 7, options);
        const auto nf = dominant_eigs(build_covariance(cluster, array, CorrelationModel::NearField), 10);
        const auto ff = dominant_eigs(build_covariance(cluster, array, CorrelationModel::FarField), 10);
        std::printf("%10.2f %12.4f\n", r, normalized_chordal_distance(nf, ff));
    }

    Scenario s;
    s.ues = {UeSpec{start, 3.0, 10, {}}};
    s.cluster = options;
    s.scatterer_draws = 2;
    s.trials_per_draw = 2000;
    const DetectorKind kinds[] = {DetectorKind::SingleUserExact, DetectorKind::SingleUserMismatched};
    const SerReport report = estimate_ser(s, kinds);
    for (const auto &[name, est] : report.pooled)
        std::printf("%-14s SER %.4f +- %.4f (%llu trials)\n", name.c_str(), est.joint_ser, est.wilson_95_halfwidth,
                    static_cast<unsigned long long>(est.trials));
    return 0;
}
