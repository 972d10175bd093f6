#include <cstdlib>
#include <cxxabi.h>
#include <iostream>
#include <string>
#include <typeinfo>

#include "CLI11.hpp"

#include "lattheta/json_io.hpp"

using namespace lattheta;

namespace {

// Short type name for error lines, e.g. "NotSymmetric".
std::string error_label(const std::exception& e) {
    int status = 0;
    char* dem = abi::__cxa_demangle(typeid(e).name(), nullptr, nullptr, &status);
    std::string name = (status == 0 && dem) ? dem : typeid(e).name();
    std::free(dem);
    std::string::size_type pos = name.rfind("::");
    if (pos != std::string::npos) name = name.substr(pos + 2);
    return name;
}

struct RunConfig {
    std::string path;
    std::string aut_path;
    std::uint64_t ell = 0;
    int N = 10;
    long k = 0;
    int threads = 1;
    double budget = 0;
    bool has_budget = false;
    bool json = false;
    bool table = false;
    bool slow = false;
    bool neighbors = false;
};

ThetaOptions theta_options(const RunConfig& cfg) {
    ThetaOptions opts;
    opts.threads = cfg.threads;
    if (cfg.has_budget) {
        opts.budget = cfg.budget;
        opts.override_budget = true;
    }
    return opts;
}

std::string join_decimals(const std::vector<BigInt>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + decimal(x);
    return s;
}

std::string join_decimals(const std::vector<BigRat>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + decimal(x);
    return s;
}

void cmd_analyze(const RunConfig& cfg) {
    Lattice lat = load_lattice(cfg.path);
    if (cfg.json) {
        Json j = analyze_json(lat);
        if (cfg.ell != 0) {
            GradingTag tag = grading_tag(lat, cfg.ell);
            Json g = Json::object();
            g["residue"] = tag.residue;
            g["modulus"] = tag.modulus;
            j["grading"] = std::move(g);
        }
        std::cout << dump_json(j);
        return;
    }
    if (!lat.name.empty()) std::cout << lat.name << "\n";
    std::cout << "rank " << lat.rank << ", det " << decimal(lat.det) << ", divisors "
              << join_decimals(lat.divisors) << ", level " << decimal(lat.level) << ", e="
              << decimal(lat.e_sum) << ", weight " << decimal(make_rat(lat.e_sum, BigInt(2)))
              << "\n";
    if (cfg.ell != 0) {
        GradingTag tag = grading_tag(lat, cfg.ell);
        std::cout << "grading: " << tag.residue << " (mod " << tag.modulus << ")\n";
    }
}

void cmd_theta(const RunConfig& cfg) {
    Lattice lat = load_lattice(cfg.path);
    QSeries<BigInt> s = theta_series(lat, cfg.N, theta_options(cfg));
    if (cfg.json) {
        Json j = Json::object();
        j["kind"] = "theta-series";
        if (!lat.name.empty()) j["lattice"] = lat.name;
        j["prec"] = s.prec;
        j["coefficients"] = series_coefficients_json(s);
        std::cout << dump_json(j);
        return;
    }
    if (cfg.table) {
        for (int n = 0; n <= s.prec; ++n)
            std::cout << n << " " << decimal(s.c[static_cast<std::size_t>(n)]) << "\n";
        return;
    }
    std::cout << "theta = " << s << "\n";
}

void cmd_congruence(const RunConfig& cfg) {
    Lattice lat = load_lattice(cfg.path);
    if (cfg.neighbors) {
        if (!cfg.slow)
            throw PreconditionViolation("neighbor averaging is long-running; pass --slow to confirm");
        NeighborReport rep = eisenstein_from_neighbors(lat, cfg.ell, cfg.N, theta_options(cfg));
        if (cfg.json) {
            Json j = Json::object();
            j["kind"] = "neighbor-average";
            if (!lat.name.empty()) j["lattice"] = lat.name;
            j["ell"] = cfg.ell;
            j["isotropic_lines"] = rep.isotropic_lines;
            j["combined"] = series_coefficients_json(rep.combined);
            Json reduced = Json::array();
            for (int n = 0; n <= rep.series.prec; ++n)
                reduced.push_back(rep.series.c[static_cast<std::size_t>(n)]);
            j["reduced"] = std::move(reduced);
            std::cout << dump_json(j);
            return;
        }
        std::cout << "isotropic lines: " << rep.isotropic_lines << "\n";
        std::cout << "average = " << rep.series << "\n";
        return;
    }
    CongruenceCertificate cert = find_congruent_form(lat, cfg.ell, cfg.N, theta_options(cfg));
    if (cfg.json) {
        std::cout << dump_json(certificate_json(cert));
        return;
    }
    std::cout << "f = " << form_name(cert.form) << "\n";
    std::cout << "weight " << cert.weight << ", sturm bound " << cert.sturm_bound << "\n";
    std::cout << "theta matches f mod " << cert.ell << " through q^" << cert.verified_to << "\n";
}

void cmd_extremal(const RunConfig& cfg) {
    ModularForm f = extremal_form(cfg.k, cfg.N);
    if (cfg.json) {
        Json j = Json::object();
        j["kind"] = "extremal-form";
        j["weight"] = f.weight;
        Json coords = Json::array();
        for (const auto& c : f.coords) coords.push_back(decimal(c));
        j["coordinates"] = std::move(coords);
        Json names = Json::array();
        for (const auto& m : mfdetail::monomials(f.weight)) names.push_back(monomial_name(m));
        j["monomials"] = std::move(names);
        j["form"] = form_name(f);
        Json expansion = Json::array();
        for (int n = 0; n <= f.expansion.prec; ++n)
            expansion.push_back(decimal(f.expansion.c[static_cast<std::size_t>(n)]));
        j["expansion"] = std::move(expansion);
        std::cout << dump_json(j);
        return;
    }
    std::cout << "f_" << f.weight << " = " << form_name(f) << "\n";
    std::cout << "expansion = " << f.expansion << "\n";
}

void cmd_lift(const RunConfig& cfg) {
    Lattice lat = load_lattice(cfg.path);
    LiftReport rep = main_theorem_pipeline(lat, cfg.ell, cfg.N, theta_options(cfg));
    if (cfg.json) {
        std::cout << dump_json(lift_report_json(rep));
        return;
    }
    std::cout << "hat rank " << rep.lift.hat.rank << ", det " << decimal(rep.lift.hat.det)
              << ", level " << decimal(rep.lift.hat.level) << "\n";
    std::cout << "sigma order " << rep.lift.sigma.order << "\n";
    std::cout << "blocks " << join_decimals(rep.lift.log.block_sizes) << "; norms "
              << join_decimals(rep.lift.log.block_norms) << "; d = " << decimal(rep.lift.log.d)
              << "\n";
    std::cout << "all checks pass through q^" << rep.verified_to << "\n";
    std::cout << "f = " << form_name(rep.certificate.form) << "\n";
    std::cout << "hat gram = " << matrix_json(rep.lift.hat.gram).dump() << "\n";
    std::cout << "sigma matrix = " << matrix_json(rep.lift.sigma.matrix).dump() << "\n";
}

void cmd_fixed(const RunConfig& cfg) {
    Lattice lat = load_lattice(cfg.path);
    LatticeAutomorphism aut = load_automorphism(cfg.aut_path, lat);
    FixedLattice fx = fixed_lattice(lat, aut);
    if (cfg.json) {
        Json j = Json::object();
        j["kind"] = "fixed-report";
        if (!lat.name.empty()) j["lattice"] = lat.name;
        j["order"] = aut.order;
        j["fixed"] = lattice_json(fx.lattice);
        j["embedding"] = matrix_json(fx.embedding);
        if (cfg.ell != 0) {
            IndexReport ir = index_report(lat, aut, cfg.ell);
            j["ell"] = cfg.ell;
            j["indices"] = index_report_json(ir);
            j["theta_congruent"] = check_fixed_congruence(lat, aut, cfg.ell, cfg.N, theta_options(cfg));
            j["verified_to"] = cfg.N;
        }
        std::cout << dump_json(j);
        return;
    }
    std::cout << "automorphism order " << aut.order << "\n";
    std::cout << "fixed rank " << fx.lattice.rank << ", det " << decimal(fx.lattice.det) << "\n";
    std::cout << "embedding = " << matrix_json(fx.embedding).dump() << "\n";
    if (cfg.ell != 0) {
        IndexReport ir = index_report(lat, aut, cfg.ell);
        std::cout << "fixed_disc_order " << decimal(ir.fixed_disc_order) << ", disc_fixed_order "
                  << decimal(ir.disc_fixed_order) << ", quotient_order "
                  << decimal(ir.quotient_order) << ", index_in_fixed_disc "
                  << decimal(ir.index_in_fixed_disc) << ", index_in_disc_fixed "
                  << decimal(ir.index_in_disc_fixed) << "\n";
        check_fixed_congruence(lat, aut, cfg.ell, cfg.N, theta_options(cfg));
        std::cout << "theta of the fixed copy matches mod " << cfg.ell << " through q^" << cfg.N
                  << "\n";
    }
}

void add_theta_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--threads", cfg.threads, "worker count for the theta enumerator")
        ->check(CLI::PositiveNumber);
    auto* b = sub->add_option("--budget", cfg.budget,
                              "override the enumeration budget (estimated point count)");
    sub->final_callback([&cfg, b]() { cfg.has_budget = b->count() > 0; });
}

} // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    RunConfig cfg;
    CLI::App app{"exact invariants, theta series, and level-one congruences of even lattices"};
    app.require_subcommand(1);

    CLI::App* analyze = app.add_subcommand("analyze", "print a lattice's arithmetic invariants");
    analyze->add_option("path", cfg.path, "lattice JSON file")->required();
    analyze->add_option("--l", cfg.ell, "prime for the weight grading tag");
    analyze->add_flag("--json", cfg.json, "machine-readable output");

    CLI::App* theta = app.add_subcommand("theta", "compute the theta series");
    theta->add_option("path", cfg.path, "lattice JSON file")->required();
    theta->add_option("--N", cfg.N, "precision (coefficients through q^N)")
        ->check(CLI::NonNegativeNumber);
    theta->add_flag("--table", cfg.table, "one \"n r(n)\" pair per line");
    theta->add_flag("--json", cfg.json, "machine-readable output");
    add_theta_flags(theta, cfg);

    CLI::App* congruence =
        app.add_subcommand("congruence", "find the level-one form congruent to the theta series");
    congruence->add_option("path", cfg.path, "lattice JSON file")->required();
    congruence->add_option("--l", cfg.ell, "prime modulus")->required();
    CLI::Option* cong_n =
        congruence->add_option("--N", cfg.N, "verification precision (default: past the sturm bound)");
    congruence->add_flag("--json", cfg.json, "machine-readable output");
    congruence->add_flag("--neighbors", cfg.neighbors,
                         "average the theta series of neighbor lattices instead");
    congruence->add_flag("--slow", cfg.slow, "confirm long-running work");
    add_theta_flags(congruence, cfg);

    CLI::App* extremal = app.add_subcommand("extremal", "compute an extremal form of weight k");
    extremal->add_option("--k", cfg.k, "weight (a multiple of 4)")->required();
    CLI::Option* ext_n = extremal->add_option("--N", cfg.N, "expansion precision");
    extremal->add_flag("--json", cfg.json, "machine-readable output");

    CLI::App* lift = app.add_subcommand(
        "lift", "build the rank e(L) lattice with prescribed fixed copy and verify its facts");
    lift->add_option("path", cfg.path, "lattice JSON file")->required();
    lift->add_option("--l", cfg.ell, "prime modulus")->required();
    lift->add_option("--N", cfg.N, "theta verification precision");
    lift->add_flag("--json", cfg.json, "machine-readable output");
    add_theta_flags(lift, cfg);

    CLI::App* fixed = app.add_subcommand("fixed", "fixed lattice of an automorphism");
    fixed->add_option("path", cfg.path, "lattice JSON file")->required();
    fixed->add_option("--aut", cfg.aut_path, "automorphism JSON file")->required();
    fixed->add_option("--l", cfg.ell, "prime for the index report and theta congruence");
    fixed->add_option("--N", cfg.N, "theta verification precision");
    fixed->add_flag("--json", cfg.json, "machine-readable output");
    add_theta_flags(fixed, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    // Defaults that differ per subcommand.
    if (congruence->parsed() && cong_n->count() == 0) cfg.N = -1;
    if (extremal->parsed() && ext_n->count() == 0) cfg.N = 20;

    try {
        if (analyze->parsed()) cmd_analyze(cfg);
        else if (theta->parsed()) cmd_theta(cfg);
        else if (congruence->parsed()) cmd_congruence(cfg);
        else if (extremal->parsed()) cmd_extremal(cfg);
        else if (lift->parsed()) cmd_lift(cfg);
        else if (fixed->parsed()) cmd_fixed(cfg);
    } catch (const InternalInconsistency& e) {
        std::cerr << "error [" << error_label(e) << "]: " << e.what() << "\n";
        return 4;
    } catch (const PreconditionViolation& e) {
        std::cerr << "error [" << error_label(e) << "]: " << e.what() << "\n";
        return 3;
    } catch (const InvalidInput& e) {
        std::cerr << "error [" << error_label(e) << "]: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
