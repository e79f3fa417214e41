// weylgrid command line: builders, verifications, propagator computations,
// and convergence studies with machine-readable CSV/JSON output.
//
// Exit codes: 0 success, 1 usage or domain error, 2 failed verification.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "weylgrid/weylgrid.hpp"

namespace {

using nlohmann::json;
using namespace weylgrid;

std::string fmt_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// One rectangular result table; cells keep their JSON type so CSV and JSON
// renderings agree on the numbers.
struct Table {
    std::vector<std::string> columns;
    std::vector<json> rows; // each row is a json object keyed by column

    json& add_row() {
        rows.emplace_back(json::object());
        return rows.back();
    }
};

std::string cell_to_csv(const json& cell) {
    if (cell.is_null()) return "";
    if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
    if (cell.is_number_float()) return fmt_real(cell.get<double>());
    if (cell.is_number_integer())
        return std::to_string(cell.get<long long>());
    return cell.get<std::string>();
}

std::string render_csv(const Table& t) {
    std::ostringstream out;
    for (size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const json& row : t.rows) {
        for (size_t i = 0; i < t.columns.size(); ++i) {
            out << (i ? "," : "");
            const auto it = row.find(t.columns[i]);
            out << (it == row.end() ? "" : cell_to_csv(*it));
        }
        out << "\n";
    }
    return out.str();
}

struct OutputOptions {
    std::string format = "csv";
    std::string path = "-";
    bool emit_gnuplot = false;
};

void add_output_options(CLI::App* cmd, OutputOptions& out, bool plot_capable) {
    cmd->add_option("--format,--out", out.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--output", out.path,
                    "Output path ('-' for stdout); relative paths are "
                    "resolved against $WEYLGRID_OUT_DIR when set")
        ->capture_default_str();
    if (plot_capable)
        cmd->add_flag("--emit-gnuplot", out.emit_gnuplot,
                      "Write a companion gnuplot script next to a CSV output "
                      "file");
}

std::string resolve_path(const std::string& path) {
    if (path == "-" || path.empty()) return path;
    if (path.front() == '/') return path;
    if (const char* dir = std::getenv("WEYLGRID_OUT_DIR");
        dir != nullptr && *dir != '\0')
        return std::string(dir) + "/" + path;
    return path;
}

void write_text(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw DomainError("cannot open output path: " + path);
    file << content;
}

// json payload for table-shaped results.
json table_json(const std::string& command, const Table& t) {
    return json{{"command", command}, {"columns", t.columns},
                {"rows", t.rows}};
}

void emit_table(const std::string& command, const Table& t,
                const OutputOptions& out, const json& extra = json::object()) {
    const std::string path = resolve_path(out.path);
    if (out.format == "json") {
        json payload = table_json(command, t);
        for (auto it = extra.begin(); it != extra.end(); ++it)
            payload[it.key()] = it.value();
        write_text(path, payload.dump(2) + "\n");
    } else {
        write_text(path, render_csv(t));
    }
}

void emit_gnuplot_script(const OutputOptions& out, const std::string& title,
                         const std::string& plot_spec, bool logscale_y) {
    if (!out.emit_gnuplot) return;
    if (out.path == "-" || out.format != "csv")
        throw DomainError(
            "--emit-gnuplot needs --format csv and a file output path");
    const std::string data = resolve_path(out.path);
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set title '" << title << "'\n";
    if (logscale_y) gp << "set logscale y\n";
    gp << "plot '" << data << "' " << plot_spec << "\n"
       << "pause -1\n";
    write_text(data + ".gp", gp.str());
}

// ---------------------------------------------------------------------------
// Potential specifications: free | harmonic[:k] | quartic[:c] | file:PATH

struct PotentialSpec {
    enum class Kind { free, harmonic, quartic, file };

    Kind kind = Kind::free;
    double param = 1.0;
    std::string path;

    static PotentialSpec parse(const std::string& text) {
        PotentialSpec spec;
        if (text.empty() || text == "free") return spec;
        const auto colon = text.find(':');
        const std::string head = text.substr(0, colon);
        const std::string tail =
            colon == std::string::npos ? "" : text.substr(colon + 1);
        if (head == "harmonic" || head == "quartic") {
            spec.kind = head == "harmonic" ? Kind::harmonic : Kind::quartic;
            if (!tail.empty()) {
                try {
                    spec.param = std::stod(tail);
                } catch (const std::exception&) {
                    throw DomainError("potential: bad coefficient '" + tail +
                                      "'");
                }
            }
            return spec;
        }
        if (head == "file") {
            if (tail.empty()) throw DomainError("potential: file path missing");
            spec.kind = Kind::file;
            spec.path = tail;
            return spec;
        }
        throw DomainError(
            "potential must be free, harmonic[:k], quartic[:c], or file:PATH");
    }

    // Samples from a file are values of V at the grid points, one per line,
    // indexed from rho = -(N-1)/2 upward; the line count must equal N.
    PotentialFn make(const GridSpec& g) const {
        switch (kind) {
        case Kind::free:
            return [](double) { return 0.0; };
        case Kind::harmonic: {
            const double k = param;
            return [k](double q) { return 0.5 * k * q * q; };
        }
        case Kind::quartic: {
            const double c = param;
            return [c](double q) { return c * q * q * q * q; };
        }
        case Kind::file: {
            std::ifstream file(path);
            if (!file) throw DomainError("potential file not found: " + path);
            std::vector<double> samples;
            std::string line;
            while (std::getline(file, line)) {
                if (line.empty()) continue;
                try {
                    samples.push_back(std::stod(line));
                } catch (const std::exception&) {
                    throw DomainError("potential file: bad value '" + line +
                                      "'");
                }
            }
            if (static_cast<long long>(samples.size()) != g.dim())
                throw DomainError(
                    "potential file: expected exactly " +
                    std::to_string(g.dim()) + " lines, got " +
                    std::to_string(samples.size()));
            const double spacing = g.spacing();
            const long long half = (g.dim() - 1) / 2;
            const long long n = g.dim();
            return [samples, spacing, half, n](double q) {
                const long long idx = std::llround(q / spacing) + half;
                if (idx < 0 || idx >= n)
                    throw DomainError(
                        "file potential sampled off the grid");
                return samples[static_cast<size_t>(idx)];
            };
        }
        }
        return [](double) { return 0.0; };
    }
};

// ---------------------------------------------------------------------------
// Shared numeric options

struct UnitOptions {
    double a = 1.0;
    double m = 1.0;
    double hbar = 1.0;
};

void add_unit_options(CLI::App* cmd, UnitOptions& u) {
    cmd->add_option("--a", u.a, "Length unit a")->capture_default_str();
    cmd->add_option("--m", u.m, "Mass m")->capture_default_str();
    cmd->add_option("--hbar", u.hbar, "Action unit hbar")
        ->capture_default_str();
}

EvolutionKind parse_kind(const std::string& name, long long tn_steps) {
    if (name == "cn1") return EvolutionKind::cn1();
    if (name == "cn2") return EvolutionKind::cn2();
    if (name == "tn") return EvolutionKind::tn(tn_steps);
    throw DomainError("kind must be cn1, cn2, or tn");
}

// ---------------------------------------------------------------------------
// Subcommand handlers. Each returns the process exit code.

struct WeylConfig {
    long long n = 5;
    long long n_max = 0; // 0: single n
    double tol = 1e-12;
    OutputOptions out;
};

int run_weyl(const WeylConfig& cfg) {
    Table t;
    t.columns = {"n",           "eq1_dev",   "p_order_dev",
                 "q_order_dev", "dft_dev",   "pass"};
    const long long last = cfg.n_max > 0 ? cfg.n_max : cfg.n;
    if (last < cfg.n) throw DomainError("weyl: --n-max must be >= --n");
    bool all_pass = true;
    for (long long n = cfg.n; n <= last; ++n) {
        const WeylGenerators g = build_generators(n);
        const Complex omega =
            phase_to_complex(PhaseExponent::omega_power(1, n));
        const double eq1 = max_abs(g.p.matrix() * g.q.matrix() -
                                   omega * g.q.matrix() * g.p.matrix());
        const double p_ord =
            max_abs(matrix_power(g.p.matrix(), n) - Matrix::Identity(n, n));
        const double q_ord =
            max_abs(matrix_power(g.q.matrix(), n) - Matrix::Identity(n, n));
        const double dft = max_abs(
            g.s.matrix().adjoint() * g.p.matrix() * g.s.matrix() -
            g.q.matrix());
        const bool pass = eq1 <= cfg.tol && p_ord <= cfg.tol &&
                          q_ord <= cfg.tol && dft <= cfg.tol;
        all_pass = all_pass && pass;
        json& row = t.add_row();
        row["n"] = n;
        row["eq1_dev"] = eq1;
        row["p_order_dev"] = p_ord;
        row["q_order_dev"] = q_ord;
        row["dft_dev"] = dft;
        row["pass"] = pass;
    }
    emit_table("weyl", t, cfg.out, json{{"pass", all_pass}});
    return all_pass ? 0 : 2;
}

struct GaussConfig {
    long long a = 1;
    long long b = 1;
    long long c = 1;
    bool verify = false;
    double tol = 1e-10;
    OutputOptions out;
};

int run_gauss(const GaussConfig& cfg) {
    const GaussSumSpec spec(cfg.a, cfg.b, cfg.c);
    const Complex direct = gauss_sum_direct(spec);
    const Complex recip = gauss_sum_reciprocal(spec);
    const double diff = std::abs(direct - recip);
    Table t;
    t.columns = {"a",         "b",        "c",        "direct_re",
                 "direct_im", "recip_re", "recip_im", "abs_diff"};
    json& row = t.add_row();
    row["a"] = cfg.a;
    row["b"] = cfg.b;
    row["c"] = cfg.c;
    row["direct_re"] = direct.real();
    row["direct_im"] = direct.imag();
    row["recip_re"] = recip.real();
    row["recip_im"] = recip.imag();
    row["abs_diff"] = diff;
    const bool pass = diff <= cfg.tol;
    emit_table("gauss", t, cfg.out, json{{"pass", pass}});
    if (cfg.verify && !pass) return 2;
    return 0;
}

struct PropagateConfig {
    long long n = 5;
    long long tau = 1;
    std::string kind = "cn2";
    long long tn_steps = 1;
    long long rho0 = -1;
    long long rhot = -1;
    std::string potential = "free";
    UnitOptions units;
    double tol = 1e-10;
    OutputOptions out;
};

int run_propagate(const PropagateConfig& cfg) {
    const PotentialSpec pot = PotentialSpec::parse(cfg.potential);
    const bool free_evolution = pot.kind == PotentialSpec::Kind::free;
    const bool entry_mode = cfg.rho0 >= 0 || cfg.rhot >= 0;
    if (entry_mode && (cfg.rho0 < 0 || cfg.rhot < 0))
        throw DomainError("propagate: need both --rho0 and --rhot");

    if (!free_evolution && cfg.kind != "cn2")
        throw DomainError(
            "propagate: potential steps use the cn2 kernel; drop --kind");

    if (free_evolution && entry_mode) {
        // Single entry, all evaluation routes side by side.
        const EvolutionKind kind = parse_kind(cfg.kind, cfg.tn_steps);
        const Complex mm =
            multi_step_momentum_sum(cfg.n, cfg.tau, cfg.rho0, cfg.rhot, kind);
        const Complex pw =
            multi_step_matrix_power(cfg.n, cfg.tau, cfg.rho0, cfg.rhot, kind);
        Table t;
        t.columns = {"method", "re", "im", "abs"};
        auto add = [&](const char* name, Complex v) {
            json& row = t.add_row();
            row["method"] = name;
            row["re"] = v.real();
            row["im"] = v.imag();
            row["abs"] = std::abs(v);
        };
        add("momentum_sum", mm);
        add("matrix_power", pw);
        double dev = std::abs(mm - pw);
        if (cfg.tau <= 4) {
            const Complex ns = multi_step_nested_sum(cfg.n, cfg.tau, cfg.rho0,
                                                     cfg.rhot, kind);
            add("nested_sum", ns);
            dev = std::max(dev, std::abs(mm - ns));
        }
        const bool pass = dev <= cfg.tol;
        emit_table("propagate", t, cfg.out,
                   json{{"n", cfg.n},
                        {"tau", cfg.tau},
                        {"rho0", cfg.rho0},
                        {"rhot", cfg.rhot},
                        {"max_disagreement", dev},
                        {"pass", pass}});
        return pass ? 0 : 2;
    }

    // Matrix mode (and any potential-modified evolution): tau-th power of
    // the single-step matrix.
    Matrix step;
    if (free_evolution) {
        step = step_position_matrix(cfg.n, parse_kind(cfg.kind, cfg.tn_steps))
                   .matrix();
    } else {
        const GridSpec g(cfg.n, cfg.units.a, cfg.units.m, cfg.units.hbar);
        const PotentialSamples w = sample_potential(g, pot.make(g));
        step = potential_step_matrix(cfg.n, w.standard_order()).matrix();
    }
    const Matrix total = matrix_power(step, cfg.tau);
    if (entry_mode) {
        require_position_label(cfg.n, cfg.rho0, "propagate");
        require_position_label(cfg.n, cfg.rhot, "propagate");
        Table t;
        t.columns = {"method", "re", "im", "abs"};
        json& row = t.add_row();
        const Complex v = total(cfg.rhot, cfg.rho0);
        row["method"] = "matrix_power";
        row["re"] = v.real();
        row["im"] = v.imag();
        row["abs"] = std::abs(v);
        emit_table("propagate", t, cfg.out,
                   json{{"n", cfg.n}, {"tau", cfg.tau}, {"pass", true}});
        return 0;
    }
    Table t;
    t.columns = {"rho_out", "rho_in", "re", "im", "abs"};
    for (long long r = 0; r < cfg.n; ++r)
        for (long long c = 0; c < cfg.n; ++c) {
            json& row = t.add_row();
            row["rho_out"] = r;
            row["rho_in"] = c;
            row["re"] = total(r, c).real();
            row["im"] = total(r, c).imag();
            row["abs"] = std::abs(total(r, c));
        }
    emit_table("propagate", t, cfg.out,
               json{{"n", cfg.n}, {"tau", cfg.tau}, {"pass", true}});
    return 0;
}

struct LagrangianConfig {
    long long n = 5;
    long long drho_max = -1;
    UnitOptions units;
    double tol = 1e-12;
    OutputOptions out;
};

int run_lagrangian(const LagrangianConfig& cfg) {
    require_odd_dim(cfg.n, "lagrangian");
    const GridSpec g(cfg.n, cfg.units.a, cfg.units.m, cfg.units.hbar);
    const long long half =
        cfg.drho_max >= 0 ? cfg.drho_max : (cfg.n - 1) / 2;
    Table t;
    t.columns = {"drho",          "num",         "den",
                 "dimensionless", "lattice_phase", "action_phase", "abs_dev",
                 "pass"};
    bool all_pass = true;
    for (long long d = -half; d <= half; ++d) {
        const Rational l = lagrangian_dimensionless(d);
        const double lattice =
            2.0 * std::numbers::pi / static_cast<double>(cfg.n) *
            l.to_double();
        const double vel =
            (g.spacing() * static_cast<double>(d) + g.spacing() / 2.0) /
            g.epsilon();
        const double action =
            0.5 * g.mass() * vel * vel * g.epsilon() / g.hbar();
        const double dev = std::abs(lattice - action);
        const bool pass = dev <= cfg.tol * (1.0 + std::abs(action));
        all_pass = all_pass && pass;
        json& row = t.add_row();
        row["drho"] = d;
        row["num"] = l.num;
        row["den"] = l.den;
        row["dimensionless"] = l.to_double();
        row["lattice_phase"] = lattice;
        row["action_phase"] = action;
        row["abs_dev"] = dev;
        row["pass"] = pass;
    }
    emit_table("lagrangian", t, cfg.out, json{{"pass", all_pass}});
    emit_gnuplot_script(cfg.out, "dimensionless lattice action",
                        "using 1:5 with linespoints", false);
    return all_pass ? 0 : 2;
}

struct MubChainConfig {
    long long n = 5;
    double tol = 1e-10;
    OutputOptions out;
};

int run_mub_chain(const MubChainConfig& cfg) {
    const auto chain = mub_chain(cfg.n, cfg.tol);

    json bases = json::array();
    bool all_pass = true;
    Table t;
    t.columns = {"record", "i",     "j",    "label_j",
                 "label_sigma", "value", "pass"};
    for (size_t i = 0; i < chain.size(); ++i) {
        const EigenbasisReport rep = eigenbasis_check(chain[i], cfg.tol);
        all_pass = all_pass && rep.pass;
        bases.push_back(json{{"index", i},
                             {"label", {chain[i].label().j,
                                        chain[i].label().sigma}},
                             {"eigen_residual", rep.max_residual},
                             {"pass", rep.pass}});
        json& row = t.add_row();
        row["record"] = "basis";
        row["i"] = i;
        row["label_j"] = chain[i].label().j;
        row["label_sigma"] = chain[i].label().sigma;
        row["value"] = rep.max_residual;
        row["pass"] = rep.pass;
    }
    json pairs = json::array();
    for (size_t i = 0; i < chain.size(); ++i)
        for (size_t j = i + 1; j < chain.size(); ++j) {
            const UnbiasednessReport rep =
                unbiasedness(chain[i], chain[j], cfg.tol);
            all_pass = all_pass && rep.is_mub;
            pairs.push_back(json{{"i", i},
                                 {"j", j},
                                 {"max_dev", rep.max_dev},
                                 {"is_mub", rep.is_mub}});
            json& row = t.add_row();
            row["record"] = "pair";
            row["i"] = i;
            row["j"] = j;
            row["value"] = rep.max_dev;
            row["pass"] = rep.is_mub;
        }

    const std::string path = resolve_path(cfg.out.path);
    if (cfg.out.format == "json") {
        const json payload{{"command", "mub-chain"}, {"n", cfg.n},
                           {"tolerance", cfg.tol},   {"bases", bases},
                           {"pairs", pairs},         {"pass", all_pass}};
        write_text(path, payload.dump(2) + "\n");
    } else {
        write_text(path, render_csv(t));
    }
    return all_pass ? 0 : 2;
}

struct SpectrumConfig {
    long long n = 21;
    std::string potential = "free";
    long long count = 5;
    UnitOptions units;
    OutputOptions out;
};

int run_spectrum(const SpectrumConfig& cfg) {
    const GridSpec g(cfg.n, cfg.units.a, cfg.units.m, cfg.units.hbar);
    const PotentialSpec pot = PotentialSpec::parse(cfg.potential);
    const auto values =
        spectrum(build_hamiltonian(g, pot.make(g)), cfg.count);
    Table t;
    t.columns = {"k", "eigenvalue"};
    for (size_t k = 0; k < values.size(); ++k) {
        json& row = t.add_row();
        row["k"] = k;
        row["eigenvalue"] = values[k];
    }
    emit_table("spectrum", t, cfg.out, json{{"n", cfg.n}});
    emit_gnuplot_script(cfg.out, "spectrum", "using 1:2 with points pt 7",
                        false);
    return 0;
}

struct ConvergeConfig {
    std::vector<long long> n_list;
    std::string potential = "harmonic";
    long long count = 5;
    UnitOptions units;
    OutputOptions out;
};

int run_converge(const ConvergeConfig& cfg) {
    if (cfg.n_list.empty()) throw DomainError("converge: --n-list is required");
    std::vector<long long> ns = cfg.n_list;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

    const PotentialSpec pot = PotentialSpec::parse(cfg.potential);
    const bool analytic = pot.kind == PotentialSpec::Kind::harmonic;

    // Reference spectrum: the exact oscillator ladder when available,
    // otherwise the largest grid in the list (which then gets no row).
    std::vector<double> reference;
    if (analytic) {
        const double omega = std::sqrt(pot.param / cfg.units.m);
        for (long long k = 0; k < cfg.count; ++k)
            reference.push_back(cfg.units.hbar * omega *
                                (static_cast<double>(k) + 0.5));
    } else {
        const GridSpec g(ns.back(), cfg.units.a, cfg.units.m, cfg.units.hbar);
        reference = spectrum(build_hamiltonian(g, pot.make(g)), cfg.count);
        ns.pop_back();
        if (ns.empty())
            throw DomainError(
                "converge: need at least two sizes for a self-reference sweep");
    }

    Table t;
    t.columns = {"n", "max_abs_err"};
    for (long long n : ns) {
        const GridSpec g(n, cfg.units.a, cfg.units.m, cfg.units.hbar);
        const auto values =
            spectrum(build_hamiltonian(g, pot.make(g)), cfg.count);
        double err = 0.0;
        for (long long k = 0; k < cfg.count; ++k)
            err = std::max(err, std::abs(values[static_cast<size_t>(k)] -
                                         reference[static_cast<size_t>(k)]));
        json& row = t.add_row();
        row["n"] = n;
        row["max_abs_err"] = err;
    }
    emit_table("converge", t, cfg.out,
               json{{"count", cfg.count}, {"potential", cfg.potential}});
    emit_gnuplot_script(cfg.out, "eigenvalue convergence",
                        "using 1:2 with linespoints", true);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Finite-dimensional quantum mechanics on the Schwinger grid: Weyl "
        "pairs, Gauss-sum propagators, and mutually unbiased bases"};
    app.require_subcommand(1);

    WeylConfig weyl_cfg;
    CLI::App* weyl = app.add_subcommand(
        "weyl", "Build Q, P, S and verify the Weyl relations");
    weyl->add_option("--n", weyl_cfg.n, "Dimension N")->required();
    weyl->add_option("--n-max", weyl_cfg.n_max, "Sweep N up to this value");
    weyl->add_option("--tol", weyl_cfg.tol, "Verification tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_output_options(weyl, weyl_cfg.out, false);

    GaussConfig gauss_cfg;
    CLI::App* gauss = app.add_subcommand(
        "gauss", "Evaluate a generalized Gauss sum both ways");
    gauss->add_option("--a", gauss_cfg.a, "Quadratic coefficient")->required();
    gauss->add_option("--b", gauss_cfg.b, "Linear coefficient")->required();
    gauss->add_option("--c", gauss_cfg.c, "Denominator")->required();
    gauss->add_flag("--verify", gauss_cfg.verify,
                    "Exit 2 unless both evaluations agree within --tol");
    gauss->add_option("--tol", gauss_cfg.tol, "Agreement tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_output_options(gauss, gauss_cfg.out, false);

    PropagateConfig prop_cfg;
    CLI::App* prop = app.add_subcommand(
        "propagate", "Single- or multi-step lattice propagator");
    prop->add_option("--n", prop_cfg.n, "Odd dimension N")->required();
    prop->add_option("--tau", prop_cfg.tau, "Number of time steps")
        ->capture_default_str();
    prop->add_option("--kind", prop_cfg.kind, "Evolution kind")
        ->check(CLI::IsMember({"cn1", "cn2", "tn"}))
        ->capture_default_str();
    prop->add_option("--tn-steps", prop_cfg.tn_steps,
                     "Steps folded into the tn kind")
        ->capture_default_str();
    prop->add_option("--rho0", prop_cfg.rho0, "Source position label");
    prop->add_option("--rhot", prop_cfg.rhot, "Target position label");
    prop->add_option("--potential", prop_cfg.potential,
                     "free | harmonic[:k] | quartic[:c] | file:PATH")
        ->capture_default_str();
    prop->add_option("--tol", prop_cfg.tol, "Cross-method tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_unit_options(prop, prop_cfg.units);
    add_output_options(prop, prop_cfg.out, false);

    LagrangianConfig lag_cfg;
    CLI::App* lag = app.add_subcommand(
        "lagrangian", "Dimensionless and unit-ful action phase tables");
    lag->add_option("--n", lag_cfg.n, "Odd dimension N")->required();
    lag->add_option("--drho-max", lag_cfg.drho_max,
                    "Largest |displacement| to tabulate");
    lag->add_option("--tol", lag_cfg.tol, "Identity tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_unit_options(lag, lag_cfg.units);
    add_output_options(lag, lag_cfg.out, true);

    MubChainConfig mub_cfg;
    CLI::App* mub = app.add_subcommand(
        "mub-chain", "Chain of N+1 mutually unbiased bases (N odd prime)");
    mub->add_option("--n", mub_cfg.n, "Odd prime dimension N")->required();
    mub->add_option("--tol", mub_cfg.tol, "Unbiasedness tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_output_options(mub, mub_cfg.out, false);

    SpectrumConfig spec_cfg;
    CLI::App* spec = app.add_subcommand(
        "spectrum", "Low eigenvalues of the grid Hamiltonian");
    spec->add_option("--n", spec_cfg.n, "Odd dimension N")->required();
    spec->add_option("--potential", spec_cfg.potential,
                     "free | harmonic[:k] | quartic[:c] | file:PATH")
        ->capture_default_str();
    spec->add_option("--count", spec_cfg.count, "Number of eigenvalues")
        ->capture_default_str();
    add_unit_options(spec, spec_cfg.units);
    add_output_options(spec, spec_cfg.out, true);

    ConvergeConfig conv_cfg;
    CLI::App* conv = app.add_subcommand(
        "converge", "Eigenvalue error sweep over grid sizes");
    conv->add_option("--n-list", conv_cfg.n_list,
                     "Comma-separated odd grid sizes")
        ->required()
        ->delimiter(',');
    conv->add_option("--potential", conv_cfg.potential,
                     "free | harmonic[:k] | quartic[:c] | file:PATH")
        ->capture_default_str();
    conv->add_option("--count", conv_cfg.count, "Eigenvalues compared")
        ->capture_default_str();
    add_unit_options(conv, conv_cfg.units);
    add_output_options(conv, conv_cfg.out, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (weyl->parsed()) return run_weyl(weyl_cfg);
        if (gauss->parsed()) return run_gauss(gauss_cfg);
        if (prop->parsed()) return run_propagate(prop_cfg);
        if (lag->parsed()) return run_lagrangian(lag_cfg);
        if (mub->parsed()) return run_mub_chain(mub_cfg);
        if (spec->parsed()) return run_spectrum(spec_cfg);
        if (conv->parsed()) return run_converge(conv_cfg);
    } catch (const ConsistencyError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 2;
    } catch (const CertificationError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
