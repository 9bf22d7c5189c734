#include "qstokes/io.hpp"

#include <climits>

#include <fstream>

namespace qstokes {

using nlohmann::json;

json complex_to_json(const Complex& z) {
    return json{{"re", static_cast<double>(z.real())}, {"im", static_cast<double>(z.imag())}};
}

Complex complex_from_json(const json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im"))
        throw SchemaError(field + ": expected {re, im}");
    if (!j["re"].is_number() || !j["im"].is_number())
        throw SchemaError(field + ": re/im must be numbers");
    const Complex z(static_cast<Real>(j["re"].get<double>()),
                    static_cast<Real>(j["im"].get<double>()));
    if (!is_finite(z)) throw SchemaError(field + ": values must be finite");
    return z;
}

namespace {

LaurentSeries sparse_series(const json& arr, const std::string& field) {
    if (!arr.is_array() || arr.empty())
        throw SchemaError(field + ": expected a nonempty array of {exp, re, im}");
    int lo = INT_MAX, hi = INT_MIN;
    for (const auto& e : arr) {
        if (!e.contains("exp") || !e["exp"].is_number_integer())
            throw SchemaError(field + ": entry needs an integer exp");
        const int n = e["exp"].get<int>();
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    LaurentSeries f = LaurentSeries::zero(lo, hi);
    for (const auto& e : arr)
        f.at(e["exp"].get<int>()) += complex_from_json(e, field + ".entry");
    return f;
}

json series_to_sparse(const LaurentSeries& f) {
    json arr = json::array();
    for (int n = f.lo(); n <= f.hi(); ++n) {
        if (std::abs(f.at(n)) == Real(0)) continue;
        json e = complex_to_json(f.at(n));
        e["exp"] = n;
        arr.push_back(std::move(e));
    }
    if (arr.empty()) {
        json e = complex_to_json(Complex(0));
        e["exp"] = f.lo();
        arr.push_back(std::move(e));
    }
    return arr;
}

} // namespace

BlockModule parse_module(const json& j) {
    if (!j.is_object()) throw SchemaError("top level: expected an object");
    if (!j.contains("q")) throw SchemaError("missing field q");
    if (!j.contains("blocks") || !j["blocks"].is_array() || j["blocks"].empty())
        throw SchemaError("blocks: expected a nonempty array");

    BlockModule m;
    m.q = complex_from_json(j["q"], "q");
    if (std::abs(m.q) < kQMargin) throw SchemaError("q: require |q| >= 1.1");

    for (size_t b = 0; b < j["blocks"].size(); ++b) {
        const auto& jb = j["blocks"][b];
        const std::string where = "blocks[" + std::to_string(b) + "]";
        if (!jb.contains("slope") || !jb["slope"].is_number_integer())
            throw SchemaError(where + ".slope: expected an integer");
        if (!jb.contains("matrix") || !jb["matrix"].is_array() || jb["matrix"].empty())
            throw SchemaError(where + ".matrix: expected a nonempty 2D array");
        const int r = static_cast<int>(jb["matrix"].size());
        CMat a(r, r);
        for (int i = 0; i < r; ++i) {
            const auto& row = jb["matrix"][static_cast<size_t>(i)];
            if (!row.is_array() || static_cast<int>(row.size()) != r)
                throw SchemaError(where + ".matrix: must be square");
            for (int k = 0; k < r; ++k)
                a(i, k) = complex_from_json(row[static_cast<size_t>(k)],
                                            where + ".matrix entry");
        }
        m.blocks.push_back({jb["slope"].get<int>(), a});
    }

    if (j.contains("u")) {
        if (!j["u"].is_object()) throw SchemaError("u: expected an object keyed by \"i,j\"");
        for (const auto& [key, val] : j["u"].items()) {
            const auto comma = key.find(',');
            if (comma == std::string::npos) throw SchemaError("u key '" + key + "': expected \"i,j\"");
            int bi = 0, bj = 0;
            try {
                bi = std::stoi(key.substr(0, comma)) - 1;
                bj = std::stoi(key.substr(comma + 1)) - 1;
            } catch (const std::exception&) {
                throw SchemaError("u key '" + key + "': expected integer pair");
            }
            if (bi < 0 || bj <= bi || bj >= m.block_count())
                throw SchemaError("u key '" + key + "': indices out of range (1-based, i < j)");
            const int ri = m.blocks[static_cast<size_t>(bi)].rank();
            const int rj = m.blocks[static_cast<size_t>(bj)].rank();
            SMat u(ri, rj);
            if (ri == 1 && rj == 1 && val.is_array()) {
                u(0, 0) = sparse_series(val, "u[" + key + "]");
            } else {
                if (!val.is_array() || static_cast<int>(val.size()) != ri)
                    throw SchemaError("u[" + key + "]: expected " + std::to_string(ri) + " rows");
                for (int i = 0; i < ri; ++i) {
                    const auto& row = val[static_cast<size_t>(i)];
                    if (!row.is_array() || static_cast<int>(row.size()) != rj)
                        throw SchemaError("u[" + key + "]: expected " + std::to_string(rj) +
                                          " columns");
                    for (int k = 0; k < rj; ++k)
                        u(i, k) = sparse_series(row[static_cast<size_t>(k)],
                                                "u[" + key + "](" + std::to_string(i) + "," +
                                                    std::to_string(k) + ")");
                }
            }
            // common window per block
            int lo = INT_MAX, hi = INT_MIN;
            for (auto& e : u.data()) {
                if (e.empty()) e = LaurentSeries::zero(m.blocks[static_cast<size_t>(bi)].mu,
                                                       m.blocks[static_cast<size_t>(bi)].mu);
                lo = std::min(lo, e.lo());
                hi = std::max(hi, e.hi());
            }
            u = extended(u, lo, hi);
            m.U[{bi, bj}] = std::move(u);
        }
    }
    m.validate();
    return m;
}

BlockModule parse_module_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("JSON parse error: ") + e.what());
    }
    return parse_module(j);
}

json emit_module(const BlockModule& m) {
    json j;
    j["q"] = complex_to_json(m.q);
    j["blocks"] = json::array();
    for (const auto& b : m.blocks) {
        json rows = json::array();
        for (int i = 0; i < b.rank(); ++i) {
            json row = json::array();
            for (int k = 0; k < b.rank(); ++k) row.push_back(complex_to_json(b.A(i, k)));
            rows.push_back(std::move(row));
        }
        j["blocks"].push_back(json{{"slope", b.mu}, {"matrix", rows}});
    }
    if (!m.U.empty()) {
        json u = json::object();
        for (const auto& [ij, blk] : m.U) {
            const std::string key =
                std::to_string(ij.first + 1) + "," + std::to_string(ij.second + 1);
            if (blk.rows() == 1 && blk.cols() == 1) {
                u[key] = series_to_sparse(blk(0, 0));
            } else {
                json rows = json::array();
                for (int i = 0; i < blk.rows(); ++i) {
                    json row = json::array();
                    for (int k = 0; k < blk.cols(); ++k)
                        row.push_back(series_to_sparse(blk(i, k)));
                    rows.push_back(std::move(row));
                }
                u[key] = std::move(rows);
            }
        }
        j["u"] = std::move(u);
    }
    return j;
}

bool is_operator_description(const json& j) {
    return j.is_object() && j.contains("operator");
}

QDiffOperator parse_operator(const json& j) {
    if (!is_operator_description(j)) throw SchemaError("expected an object with field 'operator'");
    QDiffOperator p;
    p.q = complex_from_json(j.value("q", json{{"re", 2.0}, {"im", 0.0}}), "q");
    if (!j["operator"].is_object())
        throw SchemaError("operator: expected an object keyed by degree");
    for (const auto& [key, val] : j["operator"].items()) {
        int deg = 0;
        try {
            deg = std::stoi(key);
        } catch (const std::exception&) {
            throw SchemaError("operator key '" + key + "': expected an integer degree");
        }
        p.coeffs.emplace(deg, sparse_series(val, "operator[" + key + "]"));
    }
    if (p.coeffs.empty()) throw SchemaError("operator: no coefficients");
    return p;
}

std::string dump_deterministic(const json& j) { return j.dump(2) + "\n"; }

} // namespace qstokes
