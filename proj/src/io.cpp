#include "kronbound/io.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kronbound {

using nlohmann::json;

nlohmann::json matrix_to_json(const RationalMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).to_string());
        rows.push_back(std::move(row));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

namespace {

Rational entry_from_json(const json& e) {
    if (e.is_string()) return Rational::from_string(e.get<std::string>());
    if (e.is_number_integer()) return Rational(e.get<long>());
    throw std::invalid_argument("matrix entry must be a string 'p/q' or an integer");
}

}  // namespace

RationalMatrix matrix_from_json(const json& j) {
    int r = j.at("rows").get<int>();
    int c = j.at("cols").get<int>();
    const json& rows = j.at("entries");
    if (static_cast<int>(rows.size()) != r)
        throw std::invalid_argument("matrix json: row count mismatch");
    std::vector<Rational> e;
    e.reserve(static_cast<size_t>(r) * c);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != c)
            throw std::invalid_argument("matrix json: column count mismatch");
        for (const auto& x : row) e.push_back(entry_from_json(x));
    }
    return RationalMatrix(r, c, std::move(e));
}

std::string matrix_to_csv(const RationalMatrix& m) {
    std::ostringstream os;
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m.at(i, j).to_string();
        os << "\n";
    }
    return os.str();
}

RationalMatrix matrix_from_csv(std::istream& in) {
    std::vector<std::vector<Rational>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<Rational> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cell.erase(0, cell.find_first_not_of(" \t\r"));
            cell.erase(cell.find_last_not_of(" \t\r") + 1);
            row.push_back(Rational::from_string(cell));
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::invalid_argument("matrix csv: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("matrix csv: empty input");
    std::vector<Rational> e;
    for (auto& row : rows)
        for (auto& x : row) e.push_back(std::move(x));
    return RationalMatrix(static_cast<int>(rows.size()),
                          static_cast<int>(e.size() / rows.size()), std::move(e));
}

namespace {

double q_from_json(const json& q) {
    if (q.is_object() && q.contains("log")) {
        const auto& l = q.at("log");
        if (!l.is_array() || l.size() != 2)
            throw std::invalid_argument("sigma json: \"log\" needs [base, value]");
        return std::log(l.at(1).get<double>()) / std::log(l.at(0).get<double>());
    }
    return q.get<double>();
}

SegmentForm form_from_string(const std::string& s) {
    if (s == "affine") return SegmentForm::affine;
    if (s == "power") return SegmentForm::power;
    if (s == "exponential") return SegmentForm::exponential;
    if (s == "logarithmic") return SegmentForm::logarithmic;
    throw std::invalid_argument("sigma json: unknown segment form '" + s + "'");
}

const char* form_to_string(SegmentForm f) {
    switch (f) {
        case SegmentForm::affine: return "affine";
        case SegmentForm::power: return "power";
        case SegmentForm::exponential: return "exponential";
        case SegmentForm::logarithmic: return "logarithmic";
    }
    return "?";
}

}  // namespace

SigmaFn sigma_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const double hint = j.contains("n") ? j.at("n").get<double>() : kUnboundedDomain;
    if (kind == "monomial") {
        double q = q_from_json(j.at("q"));
        if (!(q > 0) || q > 1.0 + 1e-12)
            throw std::invalid_argument("sigma json: monomial q must lie in (0, 1]");
        return SigmaFn::monomial(j.at("a").get<double>(), q, j.at("k0").get<double>(), hint);
    }
    if (kind == "logarithmic")
        return SigmaFn::logarithmic(j.at("a").get<double>(), j.at("b").get<double>(), hint);
    if (kind == "clamped-linear")
        return SigmaFn::clamped_linear(j.at("r").get<double>(), hint);
    if (kind == "piecewise-closed-form") {
        std::vector<Segment> segs;
        for (const auto& sj : j.at("segments")) {
            Segment s;
            s.end = sj.contains("end") && !sj.at("end").is_null()
                        ? sj.at("end").get<double>()
                        : std::numeric_limits<double>::infinity();
            s.form = form_from_string(sj.at("form").get<std::string>());
            s.coeffs = sj.at("coeffs").get<std::vector<double>>();
            segs.push_back(std::move(s));
        }
        return SigmaFn::piecewise(std::move(segs), hint);
    }
    if (kind == "piecewise-min") {
        std::vector<SigmaFn> ops;
        for (const auto& oj : j.at("operands")) ops.push_back(sigma_from_json(oj));
        return SigmaFn::piecewise_min(std::move(ops), hint);
    }
    throw std::invalid_argument("sigma json: unknown kind '" + kind + "'");
}

nlohmann::json sigma_to_json(const SigmaFn& f) {
    json j;
    if (std::isfinite(f.domain_hint())) j["n"] = f.domain_hint();
    if (const auto* m = f.as_monomial()) {
        j["kind"] = "monomial";
        j["a"] = m->a;
        j["q"] = m->q;
        j["k0"] = m->k0;
        return j;
    }
    if (const auto* l = f.as_logarithmic()) {
        j["kind"] = "logarithmic";
        j["a"] = l->a;
        j["b"] = l->b;
        return j;
    }
    if (const auto* c = f.as_clamped()) {
        j["kind"] = "clamped-linear";
        j["r"] = c->r;
        return j;
    }
    if (const auto* p = f.as_piecewise()) {
        j["kind"] = "piecewise-closed-form";
        json segs = json::array();
        for (const auto& s : p->segments) {
            json sj;
            if (std::isfinite(s.end)) sj["end"] = s.end;
            sj["form"] = form_to_string(s.form);
            sj["coeffs"] = s.coeffs;
            segs.push_back(std::move(sj));
        }
        j["segments"] = std::move(segs);
        return j;
    }
    if (const auto* m = f.as_min()) {
        j["kind"] = "piecewise-min";
        json ops = json::array();
        for (const auto& op : m->operands) ops.push_back(sigma_to_json(op));
        j["operands"] = std::move(ops);
        return j;
    }
    throw std::domain_error("sigma_to_json: kind has no serial form: " + f.describe());
}

nlohmann::json grid_to_json(const Grid& g) {
    json pts = json::array();
    for (const auto& p : g.points()) pts.push_back(json::array({p.i, p.j}));
    return json{{"nA", g.n_a()}, {"nB", g.n_b()}, {"points", std::move(pts)}};
}

Grid grid_from_json(const json& j) {
    std::vector<GridPoint> pts;
    for (const auto& pj : j.at("points"))
        pts.push_back(GridPoint{pj.at(0).get<int>(), pj.at(1).get<int>()});
    return Grid(j.at("nA").get<int>(), j.at("nB").get<int>(), std::move(pts));
}

}  // namespace kronbound
