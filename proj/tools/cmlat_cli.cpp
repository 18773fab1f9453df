#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cmlat/errors.hpp"
#include "cmlat/gluing.hpp"
#include "cmlat/json_io.hpp"
#include "cmlat/roots.hpp"
#include "cmlat/version.hpp"
#include "cmlat/volumes.hpp"

namespace {

using nlohmann::json;
using namespace cmlat;

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json coords_json(const std::vector<long>& c) {
    return json(c);
}

mpq_class parse_bound(const std::string& s) {
    mpq_class q;
    if (s.empty() || mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0 ||
        q.get_den() == 0)
        throw DomainError("malformed bound: expected a rational number");
    q.canonicalize();
    return q;
}

struct Outcome {
    json result;
    int exit_code = 0;
};

Outcome run_admissible(const HermitianLattice& lat) {
    AdmissibilityReport rep = check_admissible(lat);
    json sig = json::array();
    for (auto& [pos, neg] : rep.signatures) sig.push_back({pos, neg});
    return {{{"admissible", rep.admissible},
             {"signatures", sig},
             {"hyperbolic_index", rep.hyperbolic_index},
             {"note", rep.note}},
            0};
}

Outcome run_roots(const HermitianLattice& lat, const std::string& point,
                  const std::string& bound) {
    KVector x = parse_point(lat, point);
    ShortRootList out = enumerate_short_roots_near(lat, x, parse_bound(bound));
    json roots = json::array();
    for (auto& r : out.roots) roots.push_back(coords_json(r));
    return {{{"count", out.roots.size()},
             {"roots", roots},
             {"note", out.note},
             {"threads", out.threads}},
            0};
}

Outcome run_nodes(const HermitianLattice& lat, const std::string& point) {
    KVector x = parse_point(lat, point);
    auto nodes = nodes_at_point(lat, x);
    json arr = json::array();
    for (auto& r : nodes) arr.push_back(coords_json(r));
    return {{{"k", nodes.size()}, {"nodes", arr}}, 0};
}

Outcome run_orthoaudit(const HermitianLattice& lat, const std::string& bound,
                       const std::string& base) {
    KVector b;
    const KVector* bp = nullptr;
    if (!base.empty()) {
        b = parse_point(lat, base);
        bp = &b;
    }
    AuditReport rep = orthogonality_audit(lat, parse_bound(bound), bp);
    json viols = json::array();
    for (auto& v : rep.violations)
        viols.push_back({{"r", coords_json(v.r)},
                         {"t", coords_json(v.t)},
                         {"h_rt", v.h_rt}});
    return {{{"root_count", rep.root_count},
             {"pairs_checked", rep.pairs_checked},
             {"same_hyperplane_pairs", rep.same_hyperplane_pairs},
             {"meeting_pairs", rep.meeting_pairs},
             {"violations", viols}},
            rep.violations.empty() ? 0 : 2};
}

Outcome run_involutions(const HermitianLattice& lat, const std::string& spec) {
    AntiUnitaryInvolution alpha = parse_involution_spec(lat, spec);
    InvariantPair inv = conjugacy_invariants(alpha);
    FixedLattice fl = fixed_lattice_gram(alpha);
    json gram = json::array();
    for (auto& row : fl.gram) {
        json r = json::array();
        for (auto& e : row) r.push_back(real_element_json(e));
        gram.push_back(r);
    }
    return {{{"d", inv.d},
             {"t_class", square_class_name(inv.t_class)},
             {"t_raw", inv.t_raw},
             {"fixed_gram", gram}},
            0};
}

Outcome run_glue(const HermitianLattice& lat, const std::string& point,
                 const std::string& point2, const std::string& spec_a,
                 const std::string& spec_b) {
    KVector x = parse_point(lat, point);
    KVector y = point2.empty() ? x : parse_point(lat, point2);
    AntiUnitaryInvolution alpha = parse_involution_spec(lat, spec_a);
    AntiUnitaryInvolution beta = parse_involution_spec(lat, spec_b);
    bool glued = decide_glued(lat, x, alpha, y, beta);
    json res = {{"glued", glued}};
    if (glued) {
        auto mem =
            membership_in_local_group(lat, x, beta.A * alpha.A.conj());
        res["exponents"] = json(mem->exponents);
        res["scalar"] = element_json(mem->scalar);
    }
    return {res, 0};
}

Outcome run_counts(const HermitianLattice& lat, const std::string& point,
                   const std::string& spec) {
    KVector x = parse_point(lat, point);
    AntiUnitaryInvolution alpha = parse_involution_spec(lat, spec);
    EquivalentCount c = equivalent_involution_count(lat, x, alpha);
    if (!c.agree)
        throw DomainError("closed-form count disagrees with brute force");
    mpz_class sheets = sheet_count(lat, x, alpha);
    return {{{"k", c.k},
             {"a", c.a},
             {"b", c.b},
             {"equiv_count", c.closed_form.get_str()},
             {"sheets", sheets.get_str()}},
            0};
}

Outcome run_volume(unsigned r) {
    VolumeResult v = vol_psi0_even(r);
    return {{{"r", v.r},
             {"coefficient", rational_str(v.coefficient)},
             {"symbolic", v.symbolic},
             {"value", v.value}},
            0};
}

Outcome run_unit_search(unsigned p, unsigned bound) {
    auto hit = search_admissible_unit(p, bound);
    if (!hit)
        return {{{"found", false},
                 {"note", "no admissible candidate within exponent bound"}},
                0};
    return {{{"found", true},
             {"lambda", element_json(hit->lambda)},
             {"signs", json(hit->signs)},
             {"residue", hit->residue},
             {"admissible", hit->admissible},
             {"note", hit->note}},
            0};
}

Outcome run_forms_roundtrip(const HermitianLattice& lat) {
    const CMField& f = lat.field();
    ZMatrix E = alternating_form(lat);
    KMatrix T = skew_from_hermitian(lat);
    KMatrix back = skew_hermitian_from_alternating(f, E, lat.rank());
    bool roundtrip_ok = (back == T);
    KMatrix closed = f.kind() == FieldKind::Cyclotomic
                         ? skew_via_cyclotomic_average(f, E, lat.rank())
                         : skew_via_quadratic_identity(f, E, lat.rank());
    bool closed_ok = (closed == T);
    std::string why;
    bool skew_ok = is_skew_hermitian(f, T, &why);
    bool ok = roundtrip_ok && closed_ok && skew_ok;
    return {{{"ok", ok},
             {"roundtrip_ok", roundtrip_ok},
             {"closed_form_ok", closed_ok},
             {"skew_ok", skew_ok},
             {"note", why}},
            ok ? 0 : 2};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact hermitian-lattice toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // accept --pretty/--json after the subcommand too
    bool pretty = false, compact = false;
    app.add_flag("--pretty", pretty, "indent the JSON report");
    app.add_flag("--json", compact, "compact JSON report (default)");

    std::string lattice_path, point, point2, bound, base, inv_spec, inv_spec2;
    unsigned r_param = 0, p_param = 0, search_bound = 3;

    auto* c_adm = app.add_subcommand("admissible", "signature check at all real places");
    c_adm->add_option("--lattice", lattice_path, "lattice spec JSON file")->required();

    auto* c_roots = app.add_subcommand("roots", "short roots below a majorant bound");
    c_roots->add_option("--lattice", lattice_path)->required();
    c_roots->add_option("--point", point, "negative base point")->required();
    c_roots->add_option("--bound", bound, "majorant bound (rational)")->required();

    auto* c_nodes = app.add_subcommand("nodes", "node hyperplanes through a point");
    c_nodes->add_option("--lattice", lattice_path)->required();
    c_nodes->add_option("--point", point)->required();

    auto* c_audit = app.add_subcommand("orthoaudit", "meeting-implies-orthogonal audit");
    c_audit->add_option("--lattice", lattice_path)->required();
    c_audit->add_option("--bound", bound)->required();
    c_audit->add_option("--base", base, "base point when the Gram is not diagonal");

    auto* c_inv = app.add_subcommand("involutions", "conjugacy invariants and fixed Gram");
    c_inv->add_option("--lattice", lattice_path)->required();
    c_inv->add_option("--involution", inv_spec, "standard:i, -standard:i, or matrix JSON")
        ->required();

    auto* c_glue = app.add_subcommand("glue", "gluing relation between two involutions");
    c_glue->add_option("--lattice", lattice_path)->required();
    c_glue->add_option("--point", point)->required();
    c_glue->add_option("--point2", point2, "second point (defaults to --point)");
    c_glue->add_option("--involution", inv_spec)->required();
    c_glue->add_option("--involution2", inv_spec2)->required();

    auto* c_counts = app.add_subcommand("counts", "node structure and local counts");
    c_counts->add_option("--lattice", lattice_path)->required();
    c_counts->add_option("--point", point)->required();
    c_counts->add_option("--involution", inv_spec)->required();

    auto* c_vol = app.add_subcommand("volume", "closed-form covolume coefficient");
    c_vol->add_option("--r", r_param, "half the form rank")->required();

    auto* c_unit = app.add_subcommand("unit-search", "admissible cyclotomic unit");
    c_unit->add_option("--p", p_param, "odd prime")->required();
    c_unit->add_option("--bound", search_bound, "exponent bound (default 3)");

    auto* c_forms = app.add_subcommand("forms-roundtrip",
                                       "alternating-form correspondence check");
    c_forms->add_option("--lattice", lattice_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        json err = {{"error", std::string("malformed parameters: ") + e.what()}};
        std::cout << err.dump() << "\n";
        return 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    json inputs = json::object();
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        if (sub == c_vol) {
            inputs["r"] = r_param;
            out = run_volume(r_param);
        } else if (sub == c_unit) {
            inputs["p"] = p_param;
            inputs["bound"] = search_bound;
            out = run_unit_search(p_param, search_bound);
        } else {
            json doc = parse_json_document(slurp(lattice_path));
            HermitianLattice lat = parse_lattice_spec(doc);
            inputs["lattice"] = doc;
            if (sub == c_adm) {
                out = run_admissible(lat);
            } else if (sub == c_roots) {
                inputs["point"] = point;
                inputs["bound"] = bound;
                out = run_roots(lat, point, bound);
            } else if (sub == c_nodes) {
                inputs["point"] = point;
                out = run_nodes(lat, point);
            } else if (sub == c_audit) {
                inputs["bound"] = bound;
                if (!base.empty()) inputs["base"] = base;
                out = run_orthoaudit(lat, bound, base);
            } else if (sub == c_inv) {
                inputs["involution"] = inv_spec;
                out = run_involutions(lat, inv_spec);
            } else if (sub == c_glue) {
                inputs["point"] = point;
                if (!point2.empty()) inputs["point2"] = point2;
                inputs["involution"] = inv_spec;
                inputs["involution2"] = inv_spec2;
                out = run_glue(lat, point, point2, inv_spec, inv_spec2);
            } else if (sub == c_counts) {
                inputs["point"] = point;
                inputs["involution"] = inv_spec;
                out = run_counts(lat, point, inv_spec);
            } else {
                out = run_forms_roundtrip(lat);
            }
        }
    } catch (const std::exception& e) {
        json err = {{"error", e.what()}, {"subcommand", sub->get_name()}};
        std::cout << (pretty ? err.dump(2) : err.dump()) << "\n";
        return 1;
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();

    json report = {{"subcommand", sub->get_name()},
                   {"inputs", inputs},
                   {"result", out.result},
                   {"elapsed_ms", ms},
                   {"version", version_string}};
    std::cout << (pretty ? report.dump(2) : report.dump()) << "\n";
    return out.exit_code;
}
