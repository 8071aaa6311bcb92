// qrep: classify, scan, and certify spherical representations of the
// Drinfeld double of SU_q(n) from the command line.

#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qrep/charrep.hpp"
#include "qrep/qnum.hpp"
#include "qrep/spectra.hpp"
#include "qrep/suq2.hpp"
#include "qrep/unitary_class.hpp"
#include "qrep/weyl.hpp"

namespace {

using qrep::cplx;

// complex literal: "a+bi", "a-bi", "a", "bi", "i", "-i", "2.5-0.5i"
cplx parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    // split at the last '+'/'-' that is not a leading sign or exponent sign
    auto parse_real = [](const std::string& p) -> double {
        if (p.empty() || p == "+") return 1.0;  // bare "i"
        if (p == "-") return -1.0;
        try {
            std::size_t used = 0;
            double v = std::stod(p, &used);
            if (used != p.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed complex literal part: \"" + p + "\"");
        }
    };
    if (s.back() == 'i') {
        std::string body = s.substr(0, s.size() - 1);
        // find split point of "a+b" form
        for (std::size_t k = body.size(); k-- > 1;) {
            const char c = body[k];
            if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
                return {parse_real(body.substr(0, k)),
                        parse_real(body.substr(k))};
            }
        }
        return {0.0, parse_real(body)};
    }
    return {parse_real(s), 0.0};
}

qrep::Weight parse_weight(const std::string& text, std::size_t arity, double tol) {
    std::vector<cplx> coords;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) coords.push_back(parse_complex(part));
    if (coords.size() != arity)
        throw std::invalid_argument("expected " + std::to_string(arity) +
                                    " comma-separated components, got " +
                                    std::to_string(coords.size()));
    qrep::Weight w(coords);
    if (!w.is_trace_zero(std::max(tol, 1e-9) * 1e3))
        throw std::invalid_argument("coordinates must sum to zero");
    return w;
}

std::vector<long> parse_partition(const std::string& text) {
    std::vector<long> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) parts.push_back(std::stol(part));
    return parts;
}

struct Output {
    std::string path;  // empty = stdout
    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text << "\n";
        } else {
            std::ofstream f(path);
            f << text << "\n";
        }
    }
};

nlohmann::json class_to_json(const qrep::UnitaryClass& cls) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["class"] = qrep::to_string(cls.tag);
    if (cls.tag == qrep::ClassTag::Complementary) {
        j["t"] = cls.t;
        j["s"] = cls.s;
    }
    if (cls.reason != qrep::NonUnitaryReason::None) j["reason"] = qrep::to_string(cls.reason);
    if (!cls.witness.empty()) j["witness"] = cls.witness;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spherical unitary representations of the Drinfeld double of SU_q(n)"};
    app.require_subcommand(1);

    double q = 0.0, tol = 1e-9;
    int s_max = 8;
    std::string out_path, format = "json";
    app.add_option("--q", q, "deformation parameter in (0,1)")->required();
    app.add_option("--tol", tol, "numeric tolerance");
    app.add_option("--cutoff", s_max, "spin cutoff S_max for truncated models");
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    // classify
    auto* cmd_classify = app.add_subcommand("classify", "classify a spherical parameter");
    std::string group, nu_text;
    cmd_classify->add_option("group", group, "su2 | su3")
        ->required()
        ->check(CLI::IsMember({"su2", "su3"}));
    cmd_classify->add_option("nu", nu_text, "spherical parameter (comma-separated a+bi)")
        ->required();

    // scan
    auto* cmd_scan = app.add_subcommand("scan", "grid scan over su3 parameters (CSV)");
    std::string center_text = "0,0,0", dir1_text, dir2_text;
    double min1 = 0.0, max1 = 0.0, min2 = 0.0, max2 = 0.0, step = 0.1;
    cmd_scan->add_option("--center", center_text, "grid center");
    cmd_scan->add_option("--dir1", dir1_text, "first direction (complex weight)")->required();
    cmd_scan->add_option("--min1", min1)->required();
    cmd_scan->add_option("--max1", max1)->required();
    cmd_scan->add_option("--dir2", dir2_text, "optional second direction");
    cmd_scan->add_option("--min2", min2);
    cmd_scan->add_option("--max2", max2);
    cmd_scan->add_option("--step", step)->required();

    // intertwiner
    auto* cmd_inter = app.add_subcommand("intertwiner", "closed-form vs numeric T^s");
    std::string inter_nu_text;
    cmd_inter->add_option("nu", inter_nu_text, "su2 parameter")->required();

    // dump-model
    auto* cmd_dump = app.add_subcommand("dump-model", "JSON dump of the truncated pi^nu model");
    std::string dump_nu_text;
    cmd_dump->add_option("nu", dump_nu_text, "su2 parameter")->required();

    // qdim
    auto* cmd_qdim = app.add_subcommand("qdim", "quantum dimension of V(lambda)");
    std::size_t rank = 3;
    std::string lambda_text, mu_text;
    cmd_qdim->add_option("--n", rank, "rank n of sl_n");
    cmd_qdim->add_option("lambda", lambda_text, "partition, e.g. \"2,1\"")->required();

    // tensor
    auto* cmd_tensor = app.add_subcommand("tensor", "tensor-product decomposition");
    cmd_tensor->add_option("--n", rank, "rank n of sl_n");
    cmd_tensor->add_option("lambda", lambda_text, "first partition")->required();
    cmd_tensor->add_option("mu", mu_text, "second partition")->required();

    // prv
    auto* cmd_prv = app.add_subcommand("prv", "PRV determinant and invertibility");
    cmd_prv->add_option("--n", rank, "rank n of sl_n");
    cmd_prv->add_option("lambda", lambda_text, "partition")->required();
    cmd_prv->add_option("nu", nu_text, "spherical parameter")->required();

    // fiber
    auto* cmd_fiber = app.add_subcommand("fiber", "fiber-functor dimension bound");
    double fiber_n = 3.0;
    cmd_fiber->add_option("N", fiber_n, "candidate dimension (>= 3)")->required();

    // isolation
    auto* cmd_iso = app.add_subcommand("isolation", "property-(T) isolation certificate");
    cmd_iso->add_option("--n", rank, "odd rank n of sl_n");
    cmd_iso->add_option("nu", nu_text, "spherical parameter")->required();

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // exit 2 on usage errors
    }

    try {
        qrep::QContext ctx(q, tol);
        Output out{out_path};

        if (cmd_classify->parsed()) {
            qrep::UnitaryClass cls;
            qrep::Weight nu;
            if (group == "su2") {
                cplx z = parse_complex(nu_text);
                cls = qrep::classify_su2(ctx, z);
                nu = qrep::Weight(std::vector<cplx>{z, -z});
            } else {
                qrep::CartanData cd(3);
                nu = parse_weight(nu_text, 3, tol);
                cls = qrep::classify_su3(ctx, cd, nu);
            }
            if (format == "csv") {
                out.write(qrep::scan_csv_header(nu.n()) + "\n" +
                          qrep::scan_csv_row({nu, cls}));
            } else {
                nlohmann::json j = class_to_json(cls);
                j["nu"] = qrep::weight_to_json(nu);
                out.write(j.dump(2));
            }
            return 0;
        }

        if (cmd_scan->parsed()) {
            qrep::CartanData cd(3);
            qrep::Weight center = parse_weight(center_text, 3, tol);
            qrep::Weight dir1 = parse_weight(dir1_text, 3, tol);
            std::optional<qrep::Weight> dir2;
            if (!dir2_text.empty()) dir2 = parse_weight(dir2_text, 3, tol);
            if (step <= 0.0) throw std::invalid_argument("step must be positive");
            const long n1 = std::lround(std::floor((max1 - min1) / step + 1e-9)) + 1;
            const long n2 =
                dir2 ? std::lround(std::floor((max2 - min2) / step + 1e-9)) + 1 : 1;
            if (n1 < 0 || n2 < 0 || n1 * n2 > 1000000) {
                std::cerr << "scan: grid size exceeds 10^6 points\n";
                return 2;
            }
            std::ostringstream os;
            os << qrep::scan_csv_header(3);
            for (long i = 0; i < n1; ++i) {
                const double x = min1 + step * static_cast<double>(i);
                for (long jdx = 0; jdx < n2; ++jdx) {
                    qrep::Weight nu = center + dir1 * cplx(x, 0.0);
                    if (dir2) {
                        const double y = min2 + step * static_cast<double>(jdx);
                        nu = nu + *dir2 * cplx(y, 0.0);
                    }
                    qrep::UnitaryClass cls = qrep::classify_su3(ctx, cd, nu);
                    os << "\n" << qrep::scan_csv_row({nu, cls});
                }
            }
            out.write(os.str());
            return 0;
        }

        if (cmd_inter->parsed()) {
            const cplx nu = parse_complex(inter_nu_text);
            std::vector<cplx> closed;
            for (int s = 0; s <= s_max - 2; ++s)
                closed.push_back(qrep::intertwiner_closed_form(ctx, nu, s));
            std::vector<cplx> numeric = qrep::intertwiner_numeric(ctx, nu, s_max);
            if (format == "csv") {
                std::ostringstream os;
                os.precision(12);
                os << "s,closed_re,closed_im,numeric_re,numeric_im,abs_diff";
                for (std::size_t s = 0; s < numeric.size(); ++s)
                    os << "\n" << s << "," << closed[s].real() << "," << closed[s].imag()
                       << "," << numeric[s].real() << "," << numeric[s].imag() << ","
                       << std::abs(closed[s] - numeric[s]);
                out.write(os.str());
            } else {
                nlohmann::json j;
                j["schema_version"] = 1;
                j["nu"] = {nu.real(), nu.imag()};
                j["rows"] = nlohmann::json::array();
                for (std::size_t s = 0; s < numeric.size(); ++s)
                    j["rows"].push_back({{"s", s},
                                         {"closed", {closed[s].real(), closed[s].imag()}},
                                         {"numeric", {numeric[s].real(), numeric[s].imag()}},
                                         {"abs_diff", std::abs(closed[s] - numeric[s])}});
                out.write(j.dump(2));
            }
            return 0;
        }

        if (cmd_dump->parsed()) {
            const cplx nu = parse_complex(dump_nu_text);
            out.write(qrep::model_to_json(qrep::principal_series(ctx, nu, s_max)).dump(2));
            return 0;
        }

        if (cmd_qdim->parsed()) {
            qrep::CartanData cd(rank);
            qrep::DominantWeight lambda(parse_partition(lambda_text), rank);
            nlohmann::json j;
            j["schema_version"] = 1;
            j["lambda"] = lambda.str();
            j["dim"] = qrep::weyl_dimension(cd, lambda);
            j["qdim"] = qrep::qdim(ctx, cd, lambda);
            out.write(j.dump(2));
            return 0;
        }

        if (cmd_tensor->parsed()) {
            qrep::CartanData cd(rank);
            qrep::DominantWeight lambda(parse_partition(lambda_text), rank);
            qrep::DominantWeight mu(parse_partition(mu_text), rank);
            auto fd = qrep::tensor_decompose(cd, lambda, mu);
            nlohmann::json j;
            j["schema_version"] = 1;
            j["summands"] = nlohmann::json::array();
            for (const auto& [k, m] : fd.summands)
                j["summands"].push_back({{"lambda", k.str()}, {"multiplicity", m}});
            out.write(j.dump(2));
            return 0;
        }

        if (cmd_prv->parsed()) {
            qrep::CartanData cd(rank);
            qrep::DominantWeight lambda(parse_partition(lambda_text), rank);
            qrep::Weight nu = parse_weight(nu_text, rank, tol);
            const cplx det = qrep::prv_determinant(ctx, cd, lambda, nu);
            nlohmann::json j;
            j["schema_version"] = 1;
            j["prv_determinant"] = {det.real(), det.imag()};
            j["prv_invertible"] = qrep::prv_invertible(ctx, cd, nu);
            out.write(j.dump(2));
            return 0;
        }

        if (cmd_fiber->parsed()) {
            auto v = qrep::fiber_dimension_allowed(ctx, fiber_n);
            nlohmann::json j;
            j["schema_version"] = 1;
            j["N"] = fiber_n;
            j["t"] = v.t;
            j["allowed"] = v.allowed;
            out.write(j.dump(2));
            return 0;
        }

        if (cmd_iso->parsed()) {
            qrep::CartanData cd(rank);
            qrep::Weight nu = parse_weight(nu_text, rank, tol);
            auto cert = qrep::isolation_witness(ctx, cd, nu);
            nlohmann::json j;
            j["schema_version"] = 1;
            j["nu"] = qrep::weight_to_json(nu);
            j["verdict"] = qrep::to_string(cert.verdict);
            j["symmetry_holds"] = cert.symmetry_holds;
            j["p"] = cert.p_mask;
            j["t"] = {cert.t.real(), cert.t.imag()};
            j["s"] = {cert.s.real(), cert.s.imag()};
            j["inequality_lhs"] = cert.inequality_lhs;
            j["inequality_rhs"] = cert.inequality_rhs;
            j["note"] = cert.note;
            out.write(j.dump(2));
            return 0;
        }

        std::cerr << "no subcommand\n";
        return 2;
    } catch (const qrep::SingularParameterError& e) {
        std::cerr << "degenerate parameter: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
