#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "lattheta/lifting.hpp"

namespace lattheta {

// Insertion-ordered JSON keeps every emitted document byte-stable.
using Json = nlohmann::ordered_json;

// Exact decimal rendering; values routinely exceed machine width.
inline std::string decimal(const BigInt& v) { return v.get_str(); }

inline std::string decimal(const BigRat& v) {
    if (is_integer(v)) return numerator(v).get_str();
    return numerator(v).get_str() + "/" + denominator(v).get_str();
}

inline BigInt integer_from_json(const Json& j, const char* where) {
    if (j.is_number_integer()) return BigInt(static_cast<long>(j.get<long long>()));
    if (j.is_number_unsigned()) return BigInt(static_cast<unsigned long>(j.get<unsigned long long>()));
    if (j.is_string()) {
        try {
            return BigInt(j.get<std::string>());
        } catch (const std::invalid_argument&) {
            throw InvalidInput(std::string(where) + ": not a decimal integer string");
        }
    }
    throw InvalidInput(std::string(where) + ": expected an integer or a decimal string");
}

inline IntMatrix matrix_from_json(const Json& j, const char* where) {
    if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
        throw InvalidInput(std::string(where) + ": expected a nonempty array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    IntMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const Json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw InvalidInput(std::string(where) + ": rows must all have the same length");
        for (int c = 0; c < cols; ++c)
            m(r, c) = integer_from_json(row[static_cast<std::size_t>(c)], where);
    }
    return m;
}

inline Json matrix_json(const IntMatrix& m) {
    Json out = Json::array();
    for (int r = 0; r < m.rows; ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols; ++c) {
            const BigInt& v = m(r, c);
            if (v.fits_slong_p()) row.push_back(v.get_si());
            else row.push_back(v.get_str());
        }
        out.push_back(std::move(row));
    }
    return out;
}

// Lattice files: {"gram": [[...], ...]} with integer entries, optional "name".
inline Lattice lattice_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("gram"))
        throw InvalidInput("lattice JSON needs a \"gram\" field");
    std::string name;
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw InvalidInput("lattice \"name\" must be a string");
        name = j["name"].get<std::string>();
    }
    return make_lattice(matrix_from_json(j["gram"], "gram"), std::move(name));
}

inline Json lattice_json(const Lattice& lat) {
    Json j = Json::object();
    j["gram"] = matrix_json(lat.gram);
    if (!lat.name.empty()) j["name"] = lat.name;
    return j;
}

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open file: " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput("malformed JSON in " + path + ": " + e.what());
    }
}

inline Lattice load_lattice(const std::string& path) { return lattice_from_json(load_json(path)); }

// Automorphism files: {"matrix": [[...]]}; validated against the lattice.
inline LatticeAutomorphism automorphism_from_json(const Json& j, const Lattice& lat) {
    if (!j.is_object() || !j.contains("matrix"))
        throw InvalidInput("automorphism JSON needs a \"matrix\" field");
    return make_automorphism(lat, matrix_from_json(j["matrix"], "matrix"));
}

inline LatticeAutomorphism load_automorphism(const std::string& path, const Lattice& lat) {
    return automorphism_from_json(load_json(path), lat);
}

inline Json automorphism_json(const LatticeAutomorphism& a) {
    Json j = Json::object();
    j["matrix"] = matrix_json(a.matrix);
    j["order"] = a.order;
    return j;
}

template <class T>
inline Json series_coefficients_json(const QSeries<T>& s) {
    Json a = Json::array();
    for (int k = 0; k <= s.prec; ++k) a.push_back(decimal(s.c[static_cast<std::size_t>(k)]));
    return a;
}

inline QSeries<BigInt> series_from_json(const Json& j, const char* where) {
    if (!j.is_array() || j.empty())
        throw InvalidInput(std::string(where) + ": expected a nonempty coefficient array");
    QSeries<BigInt> s(static_cast<int>(j.size()) - 1);
    for (std::size_t k = 0; k < j.size(); ++k) s.c[k] = integer_from_json(j[k], where);
    return s;
}

inline Json analyze_json(const Lattice& lat) {
    Json j = Json::object();
    if (!lat.name.empty()) j["name"] = lat.name;
    j["rank"] = lat.rank;
    j["det"] = decimal(lat.det);
    Json divs = Json::array();
    for (const auto& d : lat.divisors) divs.push_back(decimal(d));
    j["divisors"] = std::move(divs);
    j["level"] = decimal(lat.level);
    j["e"] = decimal(lat.e_sum);
    j["weight"] = decimal(make_rat(lat.e_sum, BigInt(2)));
    return j;
}

// Human-readable name of a weight-k basis monomial E4^a E6^e Delta^b.
inline std::string monomial_name(const mfdetail::Monomial& m) {
    std::string s;
    auto append = [&s](const char* base, long e) {
        if (e == 0) return;
        if (!s.empty()) s += "*";
        s += base;
        if (e > 1) s += "^" + std::to_string(e);
    };
    append("E4", m.a);
    append("E6", m.e);
    append("Delta", m.b);
    return s.empty() ? std::string("1") : s;
}

// Signed sum over the monomial basis, e.g. "E4^3 - 720*Delta".
inline std::string form_name(const ModularForm& f) {
    std::vector<mfdetail::Monomial> basis = mfdetail::monomials(f.weight);
    internal_check(basis.size() == f.coords.size(), "coordinate count must match the basis");
    std::string out;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const BigRat& c = f.coords[i];
        if (c == 0) continue;
        BigRat mag = c < 0 ? BigRat(-c) : c;
        std::string name = monomial_name(basis[i]);
        std::string term;
        if (mag == 1 && name != "1") term = name;
        else if (name == "1") term = decimal(mag);
        else term = decimal(mag) + "*" + name;
        if (out.empty()) out = (c < 0 ? "-" : "") + term;
        else out += (c < 0 ? " - " : " + ") + term;
    }
    return out.empty() ? std::string("0") : out;
}

inline Json certificate_json(const CongruenceCertificate& cert) {
    Json j = Json::object();
    j["kind"] = "congruence-certificate";
    if (!cert.lattice_name.empty()) j["lattice"] = cert.lattice_name;
    j["ell"] = cert.ell;
    j["weight"] = cert.weight;
    j["sturm_bound"] = cert.sturm_bound;
    j["verified_to"] = cert.verified_to;
    Json coords = Json::array();
    for (const auto& c : cert.form.coords) {
        internal_check(is_integer(c), "certificate coordinates are integers");
        coords.push_back(decimal(numerator(c)));
    }
    j["coordinates"] = std::move(coords);
    Json names = Json::array();
    for (const auto& m : mfdetail::monomials(cert.weight)) names.push_back(monomial_name(m));
    j["monomials"] = std::move(names);
    j["form"] = form_name(cert.form);
    Json expansion = Json::array();
    for (int k = 0; k <= cert.form.expansion.prec; ++k) {
        const BigRat& v = cert.form.expansion.c[static_cast<std::size_t>(k)];
        internal_check(is_integer(v), "certificate expansions are integral");
        expansion.push_back(decimal(numerator(v)));
    }
    j["form_expansion"] = std::move(expansion);
    j["theta"] = series_coefficients_json(cert.theta);
    return j;
}

// Rebuild a certificate from its JSON document.  The form is recomputed from
// the stored coordinates and must reproduce the stored expansion, so a
// tampered document cannot pass re-verification by construction.
inline CongruenceCertificate certificate_from_json(const Json& j) {
    if (!j.is_object() || j.value("kind", "") != std::string("congruence-certificate"))
        throw InvalidInput("not a congruence certificate document");
    CongruenceCertificate cert;
    cert.lattice_name = j.value("lattice", std::string());
    if (!j.contains("ell") || !j["ell"].is_number_unsigned())
        throw InvalidInput("certificate needs a numeric \"ell\"");
    cert.ell = j["ell"].get<std::uint64_t>();
    cert.weight = static_cast<long>(integer_from_json(j.at("weight"), "weight").get_si());
    cert.sturm_bound = static_cast<long>(integer_from_json(j.at("sturm_bound"), "sturm_bound").get_si());
    cert.verified_to = static_cast<int>(integer_from_json(j.at("verified_to"), "verified_to").get_si());
    if (!j.contains("coordinates") || !j["coordinates"].is_array())
        throw InvalidInput("certificate needs a \"coordinates\" array");
    std::vector<BigRat> coords;
    for (const auto& c : j["coordinates"]) coords.emplace_back(integer_from_json(c, "coordinates"));
    cert.form = form_from_coords(cert.weight, coords, cert.verified_to);
    QSeries<BigInt> stored = series_from_json(j.at("form_expansion"), "form_expansion");
    if (to_rational(stored) != cert.form.expansion)
        throw InvalidInput("certificate expansion does not match its coordinates");
    cert.theta = series_from_json(j.at("theta"), "theta");
    if (cert.theta.prec < cert.verified_to)
        throw InvalidInput("certificate theta series is shorter than its verified range");
    return cert;
}

inline bool reverify_certificate(const CongruenceCertificate& cert) {
    return verify_congruence(to_rational(cert.theta), cert.form.expansion, cert.ell,
                             cert.verified_to)
        .ok;
}

inline Json index_report_json(const IndexReport& r) {
    Json j = Json::object();
    j["fixed_disc_order"] = decimal(r.fixed_disc_order);
    j["disc_fixed_order"] = decimal(r.disc_fixed_order);
    j["quotient_order"] = decimal(r.quotient_order);
    j["index_in_fixed_disc"] = decimal(r.index_in_fixed_disc);
    j["index_in_disc_fixed"] = decimal(r.index_in_disc_fixed);
    return j;
}

inline Json lift_report_json(const LiftReport& rep) {
    Json j = Json::object();
    j["kind"] = "lift-report";
    if (!rep.certificate.lattice_name.empty()) j["lattice"] = rep.certificate.lattice_name;
    j["ell"] = rep.certificate.ell;
    j["hat"] = lattice_json(rep.lift.hat);
    Json inv = Json::object();
    inv["rank"] = rep.lift.hat.rank;
    inv["det"] = decimal(rep.lift.hat.det);
    inv["level"] = decimal(rep.lift.hat.level);
    j["hat_invariants"] = std::move(inv);
    j["sigma"] = automorphism_json(rep.lift.sigma);
    j["fixed_embedding"] = matrix_json(rep.lift.fixed_embedding);
    Json log = Json::object();
    Json sizes = Json::array();
    for (const auto& b : rep.lift.log.block_sizes) sizes.push_back(decimal(b));
    log["block_sizes"] = std::move(sizes);
    Json norms = Json::array();
    for (const auto& q : rep.lift.log.block_norms) norms.push_back(decimal(q));
    log["block_norms"] = std::move(norms);
    log["d"] = decimal(rep.lift.log.d);
    j["construction"] = std::move(log);
    Json checks = Json::object();
    checks["disc_fixed_trivial"] = rep.disc_fixed_trivial;
    checks["disc_order_one_mod_ell"] = rep.disc_order_one_mod_ell;
    checks["rank_multiple_of_four"] = rep.rank_multiple_of_four;
    checks["theta_congruent"] = rep.theta_congruent;
    j["checks"] = std::move(checks);
    j["indices"] = index_report_json(rep.indices);
    j["verified_to"] = rep.verified_to;
    j["certificate"] = certificate_json(rep.certificate);
    return j;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

} // namespace lattheta
