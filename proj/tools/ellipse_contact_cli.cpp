// Command-line front end for the ellipse contact library.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ellipse_contact/ellipse_contact.hpp"
#include "ellipse_contact/io.hpp"
#include "ellipse_contact/oracle.hpp"

namespace ec = ellipse_contact;
using ec::io::fmt17;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_input_error = 2;

struct ShapeArgs {
    double a1 = 0, b1 = 0, a2 = 0, b2 = 0;
};

void add_shape_options(CLI::App* cmd, ShapeArgs& s)
{
    cmd->add_option("--a1", s.a1, "semi-major axis of ellipse 1")->required();
    cmd->add_option("--b1", s.b1, "semi-minor axis of ellipse 1")->required();
    cmd->add_option("--a2", s.a2, "semi-major axis of ellipse 2")->required();
    cmd->add_option("--b2", s.b2, "semi-minor axis of ellipse 2")->required();
}

ec::EllipseShape shape1(const ShapeArgs& s) { return ec::detail::named_shape(s.a1, s.b1, "ellipse 1"); }
ec::EllipseShape shape2(const ShapeArgs& s) { return ec::detail::named_shape(s.a2, s.b2, "ellipse 2"); }

ec::PairConfiguration pair_from_degrees(const ShapeArgs& s, double t1, double t2, double td)
{
    return {shape1(s), shape2(s), ec::UnitVec2::from_degrees(t1), ec::UnitVec2::from_degrees(t2),
            ec::UnitVec2::from_degrees(td)};
}

unsigned worker_count()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ELLIPSE_CONTACT_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, static_cast<unsigned>(cap));
    }
    return n;
}

// Runs fn(i) for i in [0, n) on the worker pool; results are stored by index so
// output order never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t n, Fn fn)
{
    const unsigned workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(n, 1));
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
}

json solution_json(const ec::PairConfiguration& cfg, const ec::ContactSolution& s, bool full)
{
    const auto r = ec::tangency_residuals(cfg, s);
    json j{{"d", s.d},
           {"d_prime", s.d_prime},
           {"q", s.q},
           {"branch", ec::to_string(s.branch)},
           {"contact_point", {s.contact_point.x, s.contact_point.y}},
           {"residual_ellipse1", r.on_ellipse1},
           {"residual_ellipse2", r.on_ellipse2},
           {"normal_cross", r.normal_cross}};
    if (full) {
        j["contact_normal"] = {s.contact_normal.x(), s.contact_normal.y()};
        j["sin_psi"] = s.sin_psi;
        j["cos_psi"] = s.cos_psi;
        j["sin_gamma"] = s.sin_gamma;
        j["cos_gamma"] = s.cos_gamma;
        j["a2_prime"] = s.transformed.a2p;
        j["b2_prime"] = s.transformed.b2p;
        j["delta"] = s.transformed.delta;
        j["cos_phi"] = s.transformed.cos_phi;
        j["sin_phi"] = s.transformed.sin_phi;
    }
    return j;
}

void print_solution(const json& j)
{
    for (const auto& [key, val] : j.items()) {
        std::cout << key << " =";
        if (val.is_array())
            for (const auto& v : val) std::cout << ' ' << fmt17(v.get<double>());
        else if (val.is_string())
            std::cout << ' ' << val.get<std::string>();
        else
            std::cout << ' ' << fmt17(val.get<double>());
        std::cout << '\n';
    }
}

// ------------------------------------------------------------------ batch

struct BatchRow {
    std::size_t line = 0;
    std::string id;
    double a1, b1, a2, b2, t1, t2, td;
};

struct BatchResult {
    std::optional<ec::ContactSolution> sol;
    ec::TangencyResiduals res;
    std::string error;
};

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(ec::io::detail::trim(cur));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

const std::vector<std::string> batch_fields{"a1", "b1", "a2", "b2", "theta1", "theta2", "theta_d"};

void read_csv_rows(std::istream& in, std::vector<BatchRow>& rows, std::vector<std::string>& rejects,
                   std::size_t& data_lines)
{
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (ec::io::detail::trim(line).empty()) continue;
        if (header.empty()) {
            header = split_csv(line);
            for (const auto& f : batch_fields)
                if (std::find(header.begin(), header.end(), f) == header.end())
                    throw ec::io::ParseError("CSV header is missing column '" + f + "'");
            continue;
        }
        ++data_lines;
        const auto cells = split_csv(line);
        if (cells.size() != header.size()) {
            rejects.push_back("line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                              " fields, found " + std::to_string(cells.size()));
            continue;
        }
        try {
            BatchRow r;
            r.line = lineno;
            auto get = [&](const std::string& name) {
                const auto it = std::find(header.begin(), header.end(), name);
                return ec::io::parse_double(cells[it - header.begin()], name);
            };
            r.a1 = get("a1");
            r.b1 = get("b1");
            r.a2 = get("a2");
            r.b2 = get("b2");
            r.t1 = get("theta1");
            r.t2 = get("theta2");
            r.td = get("theta_d");
            const auto id = std::find(header.begin(), header.end(), "id");
            if (id != header.end()) r.id = cells[id - header.begin()];
            rows.push_back(r);
        } catch (const std::exception& e) {
            rejects.push_back("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void read_jsonl_rows(std::istream& in, std::vector<BatchRow>& rows, std::vector<std::string>& rejects,
                     std::size_t& data_lines)
{
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (ec::io::detail::trim(line).empty()) continue;
        ++data_lines;
        try {
            const json j = json::parse(line);
            BatchRow r;
            r.line = lineno;
            auto get = [&](const std::string& name) {
                if (!j.contains(name) || !j[name].is_number())
                    throw ec::io::ParseError(name + ": missing or not a number");
                return j[name].get<double>();
            };
            r.a1 = get("a1");
            r.b1 = get("b1");
            r.a2 = get("a2");
            r.b2 = get("b2");
            r.t1 = get("theta1");
            r.t2 = get("theta2");
            r.td = get("theta_d");
            if (j.contains("id")) r.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
            rows.push_back(r);
        } catch (const std::exception& e) {
            rejects.push_back("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

int cmd_batch(const std::string& input, const std::string& output, const std::string& format,
              const std::string& input_format, const std::string& rejects_path)
{
    std::ifstream in(input);
    if (!in) throw ec::io::ParseError("cannot open input file '" + input + "'");
    std::string ifmt = input_format;
    if (ifmt.empty()) ifmt = (input.size() >= 6 && input.substr(input.size() - 6) == ".jsonl") ? "jsonl" : "csv";

    std::vector<BatchRow> rows;
    std::vector<std::string> rejects;
    std::size_t data_lines = 0;
    if (ifmt == "jsonl") read_jsonl_rows(in, rows, rejects, data_lines);
    else read_csv_rows(in, rows, rejects, data_lines);

    std::vector<BatchResult> results(rows.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        const BatchRow& r = rows[i];
        try {
            const auto cfg = pair_from_degrees({r.a1, r.b1, r.a2, r.b2}, r.t1, r.t2, r.td);
            results[i].sol = ec::closest_approach(cfg);
            results[i].res = ec::tangency_residuals(cfg, *results[i].sol);
        } catch (const std::exception& e) {
            results[i].error = e.what();
        }
    });

    std::ofstream file;
    if (output != "-") {
        file.open(output);
        if (!file) throw ec::io::ParseError("cannot open output file '" + output + "'");
    }
    std::ostream& out = output == "-" ? std::cout : file;
    if (format == "csv")
        out << "id,a1,b1,a2,b2,theta1,theta2,theta_d,d,d_prime,q,branch,rc_x,rc_y,residual_ellipse1,"
               "residual_ellipse2,normal_cross\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const BatchRow& r = rows[i];
        const BatchResult& res = results[i];
        if (!res.sol) {
            rejects.push_back("line " + std::to_string(r.line) + ": " + res.error);
            continue;
        }
        const auto& s = *res.sol;
        if (format == "csv") {
            out << r.id << ',' << fmt17(r.a1) << ',' << fmt17(r.b1) << ',' << fmt17(r.a2) << ',' << fmt17(r.b2) << ','
                << fmt17(r.t1) << ',' << fmt17(r.t2) << ',' << fmt17(r.td) << ',' << fmt17(s.d) << ','
                << fmt17(s.d_prime) << ',' << fmt17(s.q) << ',' << ec::to_string(s.branch) << ','
                << fmt17(s.contact_point.x) << ',' << fmt17(s.contact_point.y) << ',' << fmt17(res.res.on_ellipse1)
                << ',' << fmt17(res.res.on_ellipse2) << ',' << fmt17(res.res.normal_cross) << '\n';
        } else {
            json j{{"a1", r.a1}, {"b1", r.b1}, {"a2", r.a2}, {"b2", r.b2}, {"theta1", r.t1}, {"theta2", r.t2},
                   {"theta_d", r.td}};
            if (!r.id.empty()) j["id"] = r.id;
            j.update(solution_json(pair_from_degrees({r.a1, r.b1, r.a2, r.b2}, r.t1, r.t2, r.td), s, false));
            out << j.dump() << '\n';
        }
    }

    std::sort(rejects.begin(), rejects.end(), [](const std::string& x, const std::string& y) {
        return std::stoul(x.substr(5)) < std::stoul(y.substr(5));
    });
    std::ofstream rej_file;
    if (!rejects_path.empty()) rej_file.open(rejects_path);
    std::ostream& rej = rejects_path.empty() ? std::cerr : rej_file;
    for (const auto& m : rejects) rej << m << '\n';
    if (data_lines > 0 && 2 * rejects.size() > data_lines) {
        std::cerr << "batch: " << rejects.size() << " of " << data_lines << " rows rejected\n";
        return exit_input_error;
    }
    return exit_ok;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
    int trials = 1000;
    std::uint64_t seed = 1;
    double tol = 1e-7;
    std::string stratum = "all";
    int samples = 4096;
    double bisection_tol = 1e-10;
    double max_aspect = 20.0;
    int show = 20;
};

int cmd_verify(const VerifyArgs& a)
{
    ec::OracleSettings os;
    os.boundary_samples = a.samples;
    os.bisection_tol = a.bisection_tol;
    os.validate();
    if (a.trials < 1) throw ec::io::ParseError("--trials must be >= 1");
    if (!(a.tol >= 0.0)) throw ec::io::ParseError("--tol must be non-negative");

    std::optional<ec::Stratum> only;
    if (a.stratum == "near-parallel") only = ec::Stratum::NearParallelAxes;
    else if (a.stratum == "near-perpendicular") only = ec::Stratum::NearPerpendicular;
    else if (a.stratum == "near-circular") only = ec::Stratum::NearCircular;
    else if (a.stratum == "uniform") only = ec::Stratum::Uniform;
    else if (a.stratum == "circles") only = ec::Stratum::Circles;
    else if (a.stratum != "all") throw ec::io::ParseError("--stratum: unknown value '" + a.stratum + "'");

    ec::ConfigurationGenerator gen(a.seed, a.max_aspect);
    std::vector<ec::RandomConfiguration> cfgs;
    cfgs.reserve(a.trials);
    for (int i = 0; i < a.trials; ++i) cfgs.push_back(only ? gen.next(*only) : gen.next());

    struct Trial {
        double err = 0, res = 0, ncross = 0;
        std::string error;
    };
    std::vector<Trial> out(cfgs.size());
    parallel_for(cfgs.size(), [&](std::size_t i) {
        try {
            const auto s = ec::closest_approach(cfgs[i].cfg);
            const double od = ec::oracle_distance(cfgs[i].cfg, os);
            const auto r = ec::tangency_residuals(cfgs[i].cfg, s);
            out[i] = {std::abs(s.d - od) / s.d, std::max(r.on_ellipse1, r.on_ellipse2), r.normal_cross, {}};
        } catch (const std::exception& e) {
            out[i].error = e.what();
        }
    });

    double max_err = 0, sum_err = 0, max_res = 0, max_ncross = 0;
    std::vector<std::string> failures;
    std::map<std::string, std::pair<int, double>> per_stratum;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& t = out[i];
        auto& ps = per_stratum[ec::to_string(cfgs[i].stratum)];
        ++ps.first;
        if (!t.error.empty()) {
            failures.push_back("trial " + std::to_string(i) + " (" + ec::to_string(cfgs[i].stratum) + "): " + t.error);
            continue;
        }
        max_err = std::max(max_err, t.err);
        ps.second = std::max(ps.second, t.err);
        sum_err += t.err;
        max_res = std::max(max_res, t.res);
        max_ncross = std::max(max_ncross, t.ncross);
        if (!(t.err <= a.tol)) {
            const auto& c = cfgs[i].cfg;
            std::ostringstream os2;
            os2 << "trial " << i << " (" << ec::to_string(cfgs[i].stratum) << "): rel err " << t.err << " a1="
                << fmt17(c.shape1.a()) << " b1=" << fmt17(c.shape1.b()) << " a2=" << fmt17(c.shape2.a())
                << " b2=" << fmt17(c.shape2.b()) << " theta1=" << fmt17(c.k1.angle() * 180 / M_PI)
                << " theta2=" << fmt17(c.k2.angle() * 180 / M_PI) << " theta_d=" << fmt17(c.dhat.angle() * 180 / M_PI);
            failures.push_back(os2.str());
        }
    }

    std::cout << "trials: " << a.trials << " (seed " << a.seed << ", tolerance " << a.tol << ")\n";
    for (const auto& [name, v] : per_stratum)
        std::cout << "  " << name << ": " << v.first << " trials, max rel err " << v.second << '\n';
    std::cout << "max rel err: " << max_err << '\n';
    std::cout << "mean rel err: " << sum_err / out.size() << '\n';
    std::cout << "max boundary residual: " << max_res << '\n';
    std::cout << "max normal cross: " << max_ncross << '\n';
    std::cout << "failures: " << failures.size() << '\n';
    for (std::size_t i = 0; i < failures.size() && static_cast<int>(i) < a.show; ++i)
        std::cout << "  " << failures[i] << '\n';
    return failures.empty() ? exit_ok : exit_verify_failed;
}

// ------------------------------------------------------------------ analysis

ec::QuadratureSpec quadrature(const std::string& scheme, int panels)
{
    ec::QuadratureSpec q;
    q.panels = panels;
    if (scheme == "trapezoid") q.scheme = ec::QuadratureScheme::FixedTrapezoid;
    else if (scheme == "gauss-legendre") q.scheme = ec::QuadratureScheme::GaussLegendrePanels;
    else if (scheme == "adaptive-simpson") q.scheme = ec::QuadratureScheme::AdaptiveSimpson;
    else throw ec::io::ParseError("--scheme: unknown value '" + scheme + "'");
    q.validate();
    return q;
}

struct Sweep {
    double start, stop, step;
};

Sweep parse_sweep(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 3) throw ec::io::ParseError("--sweep: expected start:stop:step");
    Sweep s{ec::io::parse_double(parts[0], "--sweep start"), ec::io::parse_double(parts[1], "--sweep stop"),
            ec::io::parse_double(parts[2], "--sweep step")};
    if (!(s.step > 0.0) || s.stop < s.start) throw ec::io::ParseError("--sweep: need step > 0 and stop >= start");
    return s;
}

// ------------------------------------------------------------------ simulate

int cmd_simulate(const std::string& config, const std::string& output, bool audit, std::optional<int> sweeps)
{
    ec::MCConfig cfg = ec::io::load_mc_config(config);
    if (audit) cfg.audit = true;
    if (sweeps) cfg.sweeps = *sweeps;
    std::ofstream file;
    if (output != "-") {
        file.open(output);
        if (!file) throw ec::io::ParseError("cannot open output file '" + output + "'");
    }
    std::ostream& out = output == "-" ? std::cout : file;
    const auto summary = ec::run_simulation(cfg, [&](int sweep, const ec::MCState& st, const ec::SweepStats& s) {
        out << ec::io::snapshot_json(sweep, st, s).dump() << '\n';
    });
    out << ec::io::summary_json(summary).dump() << '\n';
    if (output != "-")
        std::cout << "sweeps " << summary.sweeps << ", acceptance " << summary.acceptance() << ", S "
                  << summary.final_order << ", audit overlaps " << summary.audit_overlaps << ", audit mismatches "
                  << summary.audit_mismatches << '\n';
    return (summary.audit_overlaps || summary.audit_mismatches) ? exit_verify_failed : exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Distance of closest approach, contact point and overlap of two hard ellipses"};
    app.require_subcommand(1);

    // distance / contact
    ShapeArgs sh;
    double t1 = 0, t2 = 0, td = 0;
    bool as_json = false;
    auto* distance = app.add_subcommand("distance", "distance of closest approach along a centre line");
    auto* contact = app.add_subcommand("contact", "contact point, normal and transformed-frame data");
    for (auto* c : {distance, contact}) {
        add_shape_options(c, sh);
        c->add_option("--theta1", t1, "major axis of ellipse 1 (degrees)")->required();
        c->add_option("--theta2", t2, "major axis of ellipse 2 (degrees)")->required();
        c->add_option("--theta-d", td, "centre line from 1 to 2 (degrees)")->required();
        c->add_flag("--json", as_json, "print a JSON object");
    }

    // overlap
    double dx = 0, dy = 0;
    auto* overlap = app.add_subcommand("overlap", "overlap verdict for a given centre offset");
    add_shape_options(overlap, sh);
    overlap->add_option("--theta1", t1, "major axis of ellipse 1 (degrees)")->required();
    overlap->add_option("--theta2", t2, "major axis of ellipse 2 (degrees)")->required();
    overlap->add_option("--dx", dx, "x offset of centre 2 from centre 1")->required();
    overlap->add_option("--dy", dy, "y offset of centre 2 from centre 1")->required();
    overlap->add_flag("--json", as_json, "print a JSON object");

    // batch
    std::string input, output = "-", format = "csv", input_format, rejects_path;
    auto* batch = app.add_subcommand("batch", "evaluate a CSV or JSON-lines file of configurations");
    batch->add_option("--input", input, "input file (CSV with header, or .jsonl)")->required();
    batch->add_option("--output", output, "output file, '-' for stdout");
    batch->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "jsonl"}));
    batch->add_option("--input-format", input_format, "input format (default: from extension)")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    batch->add_option("--rejects", rejects_path, "file for rejected rows (default: stderr)");

    // excluded-area
    std::optional<double> angle;
    std::string sweep_text, scheme = "trapezoid";
    int panels = 2048;
    auto* exarea = app.add_subcommand("excluded-area", "excluded area at an angle between major axes");
    add_shape_options(exarea, sh);
    auto* angle_opt = exarea->add_option("--angle", angle, "angle between major axes (degrees)");
    auto* sweep_opt = exarea->add_option("--sweep", sweep_text, "start:stop:step in degrees, CSV output");
    angle_opt->excludes(sweep_opt);
    exarea->add_option("--panels", panels, "quadrature panels");
    exarea->add_option("--scheme", scheme, "trapezoid | gauss-legendre | adaptive-simpson");

    // boundary / locus
    int n = 360;
    auto* boundary = app.add_subcommand("boundary", "excluded-area boundary curve (centre of ellipse 2)");
    add_shape_options(boundary, sh);
    boundary->add_option("--theta1", t1, "major axis of ellipse 1 (degrees)")->required();
    boundary->add_option("--theta2", t2, "major axis of ellipse 2 (degrees)")->required();
    boundary->add_option("--n", n, "number of points");
    boundary->add_flag("--json", as_json, "print a JSON payload");
    auto* locus = app.add_subcommand("locus", "contact point while ellipse 1 rotates");
    add_shape_options(locus, sh);
    locus->add_option("--theta2", t2, "major axis of ellipse 2 (degrees)")->required();
    locus->add_option("--theta-d", td, "centre line from 1 to 2 (degrees)")->required();
    locus->add_option("--n", n, "number of points");
    locus->add_flag("--json", as_json, "print a JSON payload");

    // verify
    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "compare the analytic distance with the brute-force oracle");
    verify->add_option("--trials", va.trials, "number of random configurations");
    verify->add_option("--seed", va.seed, "random seed");
    verify->add_option("--tol", va.tol, "maximum relative error");
    verify->add_option("--stratum", va.stratum,
                       "all | near-parallel | near-perpendicular | near-circular | uniform | circles");
    verify->add_option("--samples", va.samples, "oracle boundary samples");
    verify->add_option("--bisection-tol", va.bisection_tol, "oracle relative bisection tolerance");
    verify->add_option("--max-aspect", va.max_aspect, "largest aspect ratio generated");
    verify->add_option("--show", va.show, "failures listed in the report");

    // simulate
    std::string config;
    bool audit = false;
    std::optional<int> sweeps;
    auto* simulate = app.add_subcommand("simulate", "hard-ellipse Monte Carlo");
    simulate->add_option("--config", config, "run configuration (JSON or key = value)")->required();
    simulate->add_option("--output", output, "trajectory file (JSON lines), '-' for stdout");
    simulate->add_flag("--audit", audit, "all-pairs overlap audit after every sweep");
    simulate->add_option("--sweeps", sweeps, "override the number of sweeps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_input_error;
    }

    std::cout.precision(17);
    try {
        if (distance->parsed() || contact->parsed()) {
            const auto cfg = pair_from_degrees(sh, t1, t2, td);
            const auto sol = ec::closest_approach(cfg);
            const json j = solution_json(cfg, sol, contact->parsed());
            if (as_json) std::cout << j.dump() << '\n';
            else print_solution(j);
        } else if (overlap->parsed()) {
            const auto s1 = shape1(sh), s2 = shape2(sh);
            const auto k1 = ec::UnitVec2::from_degrees(t1), k2 = ec::UnitVec2::from_degrees(t2);
            const ec::Vec2 r{dx, dy};
            std::string verdict;
            bool concentric = false;
            try {
                verdict = ec::to_string(ec::overlap(s1, s2, k1, k2, r));
            } catch (const ec::ConcentricCenters&) {
                verdict = "overlapping";
                concentric = true;
            }
            json j{{"verdict", verdict}, {"separation", r.norm()}, {"concentric", concentric}};
            if (!concentric) j["d"] = ec::closest_approach({s1, s2, k1, k2, ec::UnitVec2(r)}).d;
            if (as_json) {
                std::cout << j.dump() << '\n';
            } else {
                std::cout << "verdict = " << verdict << (concentric ? " (concentric centres)" : "") << '\n';
                std::cout << "separation = " << fmt17(r.norm()) << '\n';
                if (!concentric) std::cout << "d = " << fmt17(j["d"].get<double>()) << '\n';
            }
        } else if (batch->parsed()) {
            return cmd_batch(input, output, format, input_format, rejects_path);
        } else if (exarea->parsed()) {
            const auto q = quadrature(scheme, panels);
            const auto s1 = shape1(sh), s2 = shape2(sh);
            if (!sweep_text.empty()) {
                const Sweep sw = parse_sweep(sweep_text);
                const auto count = static_cast<std::size_t>(std::floor((sw.stop - sw.start) / sw.step + 1e-9)) + 1;
                std::vector<double> vals(count);
                parallel_for(count, [&](std::size_t i) {
                    vals[i] = ec::excluded_area_at_angle(s1, s2, sw.start + i * sw.step, q);
                });
                std::cout << "angle_deg,excluded_area\n";
                for (std::size_t i = 0; i < count; ++i)
                    std::cout << fmt17(sw.start + i * sw.step) << ',' << fmt17(vals[i]) << '\n';
            } else {
                if (!angle) throw ec::io::ParseError("excluded-area: one of --angle or --sweep is required");
                std::cout << fmt17(ec::excluded_area_at_angle(s1, s2, *angle, q)) << '\n';
            }
        } else if (boundary->parsed()) {
            const auto c = ec::excluded_boundary(shape1(sh), shape2(sh), ec::UnitVec2::from_degrees(t1),
                                                 ec::UnitVec2::from_degrees(t2), n);
            if (as_json) std::cout << ec::io::curve_json(c, "theta_deg").dump() << '\n';
            else ec::io::write_curve_csv(std::cout, c, "theta_deg");
        } else if (locus->parsed()) {
            const auto c = ec::contact_locus(shape1(sh), shape2(sh), ec::UnitVec2::from_degrees(t2),
                                             ec::UnitVec2::from_degrees(td), n);
            if (as_json) std::cout << ec::io::curve_json(c, "theta1_deg").dump() << '\n';
            else ec::io::write_curve_csv(std::cout, c, "theta1_deg");
        } else if (verify->parsed()) {
            return cmd_verify(va);
        } else if (simulate->parsed()) {
            return cmd_simulate(config, output, audit, sweeps);
        }
    } catch (const ec::NoPhysicalRoot& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_verify_failed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    }
    return exit_ok;
}
