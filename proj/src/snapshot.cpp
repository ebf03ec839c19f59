#include "hypmap/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hypmap {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void write_sidecar(const fs::path& csv_path, const Grid2D& g, double time) {
    json meta{{"nx", g.nx},       {"ny", g.ny},
              {"hx", g.hx},       {"hy", g.hy},
              {"x1_min", g.x1_min}, {"x2_min", g.x2_min},
              {"boundary_mode", to_string(g.boundary)},
              {"time", time}};
    fs::path side = csv_path;
    side.replace_extension(".json");
    std::ofstream out(side);
    if (!out) throw std::runtime_error("cannot write " + side.string());
    out << meta.dump(2) << "\n";
}

template <class Get>
void write_csv(const fs::path& path, const Grid2D& g, double time, Get&& value) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "x1,x2,re,im\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Complex v = value(i, j);
            out << format_double(g.x1(i)) << ',' << format_double(g.x2(j)) << ','
                << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
        }
    write_sidecar(path, g, time);
}

}  // namespace

void write_scalar_field(const fs::path& csv_path, const ScalarField& f, double time) {
    write_csv(csv_path, f.grid, time, [&](int i, int j) { return f.at(i, j); });
}

void write_scalar_field(const fs::path& csv_path, const RealField& f, double time) {
    write_csv(csv_path, f.grid, time, [&](int i, int j) { return Complex(f.at(i, j), 0.0); });
}

ScalarField read_scalar_field(const fs::path& csv_path) {
    fs::path side = csv_path;
    side.replace_extension(".json");
    std::ifstream meta_in(side);
    if (!meta_in) throw std::runtime_error("cannot read sidecar " + side.string());
    json meta = json::parse(meta_in);
    Grid2D g;
    g.nx = meta.at("nx").get<int>();
    g.ny = meta.at("ny").get<int>();
    g.hx = meta.at("hx").get<double>();
    g.hy = meta.at("hy").get<double>();
    g.x1_min = meta.at("x1_min").get<double>();
    g.x2_min = meta.at("x2_min").get<double>();
    g.boundary = boundary_mode_from_string(meta.at("boundary_mode").get<std::string>());
    g.validate();

    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot read " + csv_path.string());
    std::string line;
    std::getline(in, line);   // header
    ScalarField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!std::getline(in, line))
                throw std::runtime_error("truncated field file " + csv_path.string());
            std::istringstream ss(line);
            std::string tok;
            double vals[4];
            for (double& v : vals) {
                if (!std::getline(ss, tok, ','))
                    throw std::runtime_error("malformed row in " + csv_path.string());
                v = std::stod(tok);
            }
            f.at(i, j) = Complex(vals[2], vals[3]);
        }
    return f;
}

void write_gauge_fields(const fs::path& dir, const std::string& stem, const GaugeFields& f,
                        double time) {
    fs::create_directories(dir);
    write_scalar_field(dir / (stem + "_p.csv"), f.p, time);
    write_scalar_field(dir / (stem + "_q.csv"), f.q, time);
    write_scalar_field(dir / (stem + "_r.csv"), f.r, time);
    write_scalar_field(dir / (stem + "_u.csv"), f.u, time);
}

void write_spin_field(const fs::path& dir, const std::string& stem, const SpinField& S,
                      double time) {
    fs::create_directories(dir);
    write_scalar_field(dir / (stem + "_s1.csv"), S.s1, time);
    write_scalar_field(dir / (stem + "_s2.csv"), S.s2, time);
    write_scalar_field(dir / (stem + "_s3.csv"), S.s3, time);
}

void write_frame(const fs::path& dir, const std::string& stem, const FrameSlice& F) {
    fs::create_directories(dir);
    write_csv(dir / (stem + "_nu.csv"), F.grid, F.t, [&](int i, int j) { return F.at(i, j).nu; });
    write_csv(dir / (stem + "_chi.csv"), F.grid, F.t, [&](int i, int j) { return F.at(i, j).chi; });
}

void write_radial_trajectory(const fs::path& csv_path, const std::vector<RadialState>& snapshots) {
    if (snapshots.empty()) throw std::invalid_argument("write_radial_trajectory: no snapshots");
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write " + csv_path.string());
    out << "t,rho,reQ,imQ\n";
    for (const RadialState& s : snapshots)
        for (int k = 0; k < s.grid.n; ++k)
            out << format_double(s.t) << ',' << format_double(s.grid.rho(k)) << ','
                << format_double(s.Q[k].real()) << ',' << format_double(s.Q[k].imag()) << '\n';
    const RadialGrid& g = snapshots.front().grid;
    json meta{{"n", g.n}, {"h_rho", g.h_rho}, {"R", g.R()}, {"snapshots", snapshots.size()}};
    fs::path side = csv_path;
    side.replace_extension(".json");
    std::ofstream ms(side);
    ms << meta.dump(2) << "\n";
}

void write_diagnostics(const fs::path& csv_path, const std::vector<DiagnosticsRow>& rows) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write " + csv_path.string());
    out << "t,energy,sup_gradient,max_constraint_violation\n";
    for (const DiagnosticsRow& r : rows)
        out << format_double(r.t) << ',' << format_double(r.energy) << ','
            << format_double(r.sup_gradient) << ',' << format_double(r.max_constraint_violation)
            << '\n';
}

}  // namespace hypmap
