#include "cmlat/json_io.hpp"

#include <sstream>

#include "cmlat/errors.hpp"
#include "cmlat/roots.hpp"

namespace cmlat {

using nlohmann::json;

nlohmann::json parse_json_document(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw DomainError("malformed JSON document");
    return doc;
}

mpq_class parse_rational(const json& v, const std::string& path) {
    if (v.is_number_integer()) return mpq_class((long)v.get<long long>());
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        mpq_class q;
        if (s.empty() || mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
            throw DomainError("schema violation at " + path +
                              ": expected rational string");
        if (q.get_den() == 0)
            throw DomainError("schema violation at " + path + ": zero denominator");
        q.canonicalize();
        return q;
    }
    throw DomainError("schema violation at " + path +
                      ": expected integer or rational string");
}

FieldElement parse_element(const CMField& f, const json& v, const std::string& path) {
    if (v.is_array()) {
        if (v.size() > f.degree())
            throw DomainError("schema violation at " + path +
                              ": too many coefficients");
        std::vector<mpq_class> c(f.degree(), mpq_class(0));
        for (size_t j = 0; j < v.size(); ++j)
            c[j] = parse_rational(v[j], path + "/" + std::to_string(j));
        return FieldElement(f, std::move(c));
    }
    return FieldElement::rational(f, parse_rational(v, path));
}

HermitianLattice parse_lattice_spec(const json& doc) {
    if (!doc.is_object())
        throw DomainError("schema violation at /: expected object");
    if (!doc.contains("field") || !doc["field"].is_object())
        throw DomainError("schema violation at /field: expected object");
    const json& fld = doc["field"];
    if (!fld.contains("kind") || !fld["kind"].is_string())
        throw DomainError("schema violation at /field/kind: expected string");
    std::string kind_s = fld["kind"].get<std::string>();
    FieldKind kind;
    if (kind_s == "cyclotomic")
        kind = FieldKind::Cyclotomic;
    else if (kind_s == "imag_quadratic")
        kind = FieldKind::ImagQuadratic;
    else
        throw DomainError(
            "schema violation at /field/kind: expected \"cyclotomic\" or "
            "\"imag_quadratic\"");
    auto odd_prime = [](long long n) {
        if (n < 3 || n % 2 == 0) return false;
        for (long long d = 3; d * d <= n; d += 2)
            if (n % d == 0) return false;
        return true;
    };
    if (!fld.contains("p") || !fld["p"].is_number_integer() ||
        fld["p"].get<long long>() > 1000 || !odd_prime(fld["p"].get<long long>()))
        throw DomainError("schema violation at /field/p: expected odd prime");
    unsigned p = (unsigned)fld["p"].get<long long>();
    unsigned tau = 0;
    if (fld.contains("tau")) {
        if (!fld["tau"].is_number_integer() || fld["tau"].get<long long>() < 0)
            throw DomainError(
                "schema violation at /field/tau: expected nonnegative integer");
        tau = (unsigned)fld["tau"].get<long long>();
    }
    const CMField* fp = nullptr;
    try {
        fp = &CMField::get(kind, p, tau);
    } catch (const std::exception& e) {
        // kind and p are validated above, so only tau can be rejected here
        throw DomainError("schema violation at /field/tau: " +
                          std::string(e.what()));
    }
    const CMField& f = *fp;

    if (!doc.contains("rank") || !doc["rank"].is_number_integer() ||
        doc["rank"].get<long long>() < 1 || doc["rank"].get<long long>() > 64)
        throw DomainError("schema violation at /rank: expected integer in [1, 64]");
    size_t rank = (size_t)doc["rank"].get<long long>();

    bool has_gram = doc.contains("gram"), has_diag = doc.contains("diag");
    if (has_gram == has_diag)
        throw DomainError(
            "schema violation at /: exactly one of \"gram\" and \"diag\" required");

    KMatrix H(f, rank, rank);
    if (has_diag) {
        const json& d = doc["diag"];
        if (!d.is_array() || d.size() != rank)
            throw DomainError("schema violation at /diag: expected array of length " +
                              std::to_string(rank));
        for (size_t i = 0; i < rank; ++i)
            H.at(i, i) = parse_element(f, d[i], "/diag/" + std::to_string(i));
    } else {
        const json& g = doc["gram"];
        if (!g.is_array() || g.size() != rank)
            throw DomainError("schema violation at /gram: expected array of length " +
                              std::to_string(rank));
        for (size_t i = 0; i < rank; ++i) {
            if (!g[i].is_array() || g[i].size() != rank)
                throw DomainError("schema violation at /gram/" + std::to_string(i) +
                                  ": expected array of length " + std::to_string(rank));
            for (size_t j = 0; j < rank; ++j)
                H.at(i, j) = parse_element(
                    f, g[i][j], "/gram/" + std::to_string(i) + "/" + std::to_string(j));
        }
    }

    const char* key = has_diag ? "/diag" : "/gram";
    for (size_t i = 0; i < rank; ++i)
        for (size_t j = 0; j < rank; ++j) {
            if (!H.at(i, j).is_integral())
                throw DomainError("non-integral entry at " + std::string(key) + "/" +
                                  std::to_string(i) + "/" + std::to_string(j));
            if (!(H.at(i, j) == H.at(j, i).conj()))
                throw DomainError("hermitian-symmetry violation at " +
                                  std::string(key) + "/" + std::to_string(i) + "/" +
                                  std::to_string(j));
        }
    return HermitianLattice(f, std::move(H));
}

AntiUnitaryInvolution parse_involution_spec(const HermitianLattice& lat,
                                            const std::string& text) {
    auto standard_at = [&](const std::string& s, bool neg) {
        size_t i = 0;
        try {
            i = std::stoul(s);
        } catch (const std::exception&) {
            throw DomainError("malformed involution spec: bad standard index");
        }
        return standard_involution(lat, i, neg);
    };
    if (text.rfind("standard:", 0) == 0) return standard_at(text.substr(9), false);
    if (text.rfind("-standard:", 0) == 0) return standard_at(text.substr(10), true);

    json doc = parse_json_document(text);
    size_t n = lat.rank();
    if (!doc.is_array() || doc.size() != n)
        throw DomainError("malformed involution spec: expected " +
                          std::to_string(n) + "x" + std::to_string(n) + " matrix");
    KMatrix A(lat.field(), n, n);
    for (size_t i = 0; i < n; ++i) {
        if (!doc[i].is_array() || doc[i].size() != n)
            throw DomainError("malformed involution spec: expected " +
                              std::to_string(n) + "x" + std::to_string(n) + " matrix");
        for (size_t j = 0; j < n; ++j)
            A.at(i, j) = parse_element(lat.field(), doc[i][j],
                                       "/" + std::to_string(i) + "/" +
                                           std::to_string(j));
    }
    return make_involution(lat, std::move(A));
}

KVector parse_point(const HermitianLattice& lat, const std::string& text) {
    std::vector<long> vals;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t used = 0;
            long v = std::stol(tok, &used);
            while (used < tok.size() && std::isspace((unsigned char)tok[used])) ++used;
            if (used != tok.size()) throw std::invalid_argument(tok);
            vals.push_back(v);
        } catch (const std::exception&) {
            throw DomainError("malformed point: expected comma-separated integers");
        }
    }
    const CMField& f = lat.field();
    size_t rank = lat.rank(), D = f.degree();
    if (vals.size() == rank) {
        KVector x = kvector_zero(f, rank);
        for (size_t i = 0; i < rank; ++i)
            x[i] = FieldElement::rational(f, mpq_class(vals[i]));
        return x;
    }
    if (vals.size() == rank * D) return vector_from_coords(f, vals, rank);
    throw DomainError("malformed point: expected " + std::to_string(rank) + " or " +
                      std::to_string(rank * D) + " coordinates");
}

std::string rational_str(const mpq_class& q) {
    return q.get_str();
}

json element_json(const FieldElement& a) {
    json arr = json::array();
    for (const auto& c : a.coeffs()) arr.push_back(rational_str(c));
    return arr;
}

json real_element_json(const FieldElement& a) {
    std::vector<mpq_class> c = real_subfield_coords(a);
    if (c.size() == 1) {
        if (c[0].get_den() == 1 && c[0].get_num().fits_slong_p())
            return json((long)c[0].get_num().get_si());
        return json(rational_str(c[0]));
    }
    json arr = json::array();
    for (const auto& q : c) {
        if (q.get_den() == 1 && q.get_num().fits_slong_p())
            arr.push_back((long)q.get_num().get_si());
        else
            arr.push_back(rational_str(q));
    }
    return arr;
}

}  // namespace cmlat
