#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hypmap/fields.hpp"
#include "hypmap/gauge.hpp"
#include "hypmap/radial.hpp"

// Snapshot formats: CSV with header x1,x2,re,im (row-major, 17 significant
// digits) plus a JSON sidecar <name>.json carrying grid metadata. Bundles
// (gauge fields, spin fields, frames) are one scalar file per component,
// suffixed _p/_q/_r/_u, _s1/_s2/_s3, _nu/_chi.

namespace hypmap {

void write_scalar_field(const std::filesystem::path& csv_path, const ScalarField& f, double time);
void write_scalar_field(const std::filesystem::path& csv_path, const RealField& f, double time);
ScalarField read_scalar_field(const std::filesystem::path& csv_path);

/// Writes <stem>_p.csv, _q.csv, _r.csv, _u.csv (+ sidecars).
void write_gauge_fields(const std::filesystem::path& dir, const std::string& stem,
                        const GaugeFields& f, double time);
/// Writes <stem>_s1.csv, _s2.csv, _s3.csv.
void write_spin_field(const std::filesystem::path& dir, const std::string& stem,
                      const SpinField& S, double time);
/// Writes <stem>_nu.csv, _chi.csv.
void write_frame(const std::filesystem::path& dir, const std::string& stem, const FrameSlice& F);

// Radial trajectory CSV: header t,rho,reQ,imQ, one block per snapshot, plus
// a JSON sidecar with the radial grid metadata.
void write_radial_trajectory(const std::filesystem::path& csv_path,
                             const std::vector<RadialState>& snapshots);

// Time series CSV: t,energy,sup_gradient,max_constraint_violation.
struct DiagnosticsRow {
    double t = 0.0, energy = 0.0, sup_gradient = 0.0, max_constraint_violation = 0.0;
};
void write_diagnostics(const std::filesystem::path& csv_path,
                       const std::vector<DiagnosticsRow>& rows);

/// %.17g formatting used throughout the snapshot writers.
std::string format_double(double x);

}  // namespace hypmap
