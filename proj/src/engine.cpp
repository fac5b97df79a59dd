// SPDX-License-Identifier: Apache-2.0
#include "relic/engine.hpp"

#include <fmt/format.h>

#include "duckdb.hpp"

namespace relic {

struct Engine::Impl {
    std::unique_ptr<duckdb::DuckDB> db;
    std::unique_ptr<duckdb::Connection> con;
};

Engine::Engine(const std::string &path, const std::string &memory_limit)
    : impl_(std::make_unique<Impl>()) {
    impl_->db = std::make_unique<duckdb::DuckDB>(path.empty() ? nullptr : path.c_str());
    impl_->con = std::make_unique<duckdb::Connection>(*impl_->db);
    if (!memory_limit.empty()) {
        run(fmt::format("SET memory_limit = '{}'", memory_limit));
    }
}

Engine::~Engine() = default;
Engine::Engine(Engine &&) noexcept = default;
Engine &Engine::operator=(Engine &&) noexcept = default;

void Engine::run(const std::string &sql) {
    auto res = impl_->con->Query(sql);
    if (res->HasError()) {
        throw EngineError(fmt::format("statement failed: {}\n--\n{}", res->GetError(), sql));
    }
}

void Engine::run_script(const std::string &script_text) {
    // split on ';' at top level; quotes do not contain ';' in emitted scripts
    size_t start = 0;
    while (start < script_text.size()) {
        size_t end = script_text.find(';', start);
        if (end == std::string::npos) {
            end = script_text.size();
        }
        std::string stmt = script_text.substr(start, end - start);
        // strip comments and whitespace-only fragments
        bool meaningful = false;
        for (size_t i = 0; i < stmt.size(); ++i) {
            if (stmt[i] == '-' && i + 1 < stmt.size() && stmt[i + 1] == '-') {
                i = stmt.find('\n', i);
                if (i == std::string::npos) {
                    break;
                }
                continue;
            }
            if (!isspace(static_cast<unsigned char>(stmt[i]))) {
                meaningful = true;
                break;
            }
        }
        if (meaningful) {
            run(stmt);
        }
        start = end + 1;
    }
}

std::vector<std::vector<double>> Engine::query_rows(const std::string &sql) {
    auto res = impl_->con->Query(sql);
    if (res->HasError()) {
        throw EngineError(fmt::format("query failed: {}\n--\n{}", res->GetError(), sql));
    }
    std::vector<std::vector<double>> rows;
    for (auto &row : *res) {
        std::vector<double> vals;
        for (size_t c = 0; c < res->ColumnCount(); ++c) {
            vals.push_back(row.GetValue<double>(c));
        }
        rows.push_back(std::move(vals));
    }
    return rows;
}

std::vector<int64_t> Engine::query_int_column(const std::string &sql) {
    auto res = impl_->con->Query(sql);
    if (res->HasError()) {
        throw EngineError(fmt::format("query failed: {}\n--\n{}", res->GetError(), sql));
    }
    std::vector<int64_t> vals;
    for (auto &row : *res) {
        vals.push_back(row.GetValue<int64_t>(0));
    }
    return vals;
}

int64_t Engine::query_int(const std::string &sql) {
    auto col = query_int_column(sql);
    if (col.empty()) {
        throw EngineError(fmt::format("query returned no rows: {}", sql));
    }
    return col[0];
}

double Engine::query_double(const std::string &sql) {
    auto rows = query_rows(sql);
    if (rows.empty() || rows[0].empty()) {
        throw EngineError(fmt::format("query returned no rows: {}", sql));
    }
    return rows[0][0];
}

DenseTensor Engine::read_relation(const std::string &relation,
                                  const std::vector<std::string> &key_cols, int64_t chunk_size,
                                  const std::vector<int64_t> &shape, double fill) {
    std::string keys;
    for (const auto &k : key_cols) {
        keys += k + ", ";
    }
    std::string sql;
    if (chunk_size == 1) {
        sql = fmt::format("SELECT {}col_id, value FROM {}", keys, relation);
    } else {
        sql = fmt::format("SELECT {}chunk_id * {} + off.i AS col_id, vec[off.i + 1] AS value "
                          "FROM {} CROSS JOIN (SELECT unnest(range({})) AS i) off",
                          keys, chunk_size, relation, chunk_size);
    }
    auto res = impl_->con->Query(sql);
    if (res->HasError()) {
        throw EngineError(fmt::format("read_relation failed: {}\n--\n{}", res->GetError(), sql));
    }
    DenseTensor out = DenseTensor::full(shape, static_cast<float>(fill));
    size_t ncols = key_cols.size() + 2;
    for (auto &row : *res) {
        std::vector<int64_t> idx;
        for (size_t i = 0; i + 2 < ncols; ++i) {
            idx.push_back(row.GetValue<int64_t>(i));
        }
        idx.push_back(row.GetValue<int64_t>(key_cols.size()));
        double v = row.GetValue<double>(key_cols.size() + 1);
        size_t off = 0;
        for (size_t i = 0; i < idx.size(); ++i) {
            if (idx[i] < 0 || idx[i] >= shape[i]) {
                throw EngineError(fmt::format("read_relation: index {} out of bounds on '{}'",
                                              idx[i], relation));
            }
            off = off * static_cast<size_t>(shape[i]) + static_cast<size_t>(idx[i]);
        }
        out.values()[off] = static_cast<float>(v);
    }
    return out;
}

Dialect Engine::probe_dialect() {
    Dialect d = Dialect::array();
    auto ok = [&](const std::string &sql) {
        auto res = impl_->con->Query(sql);
        return !res->HasError();
    };
    if (!ok(fmt::format("SELECT {}([1.0], [2.0])", d.dot_fn))) {
        if (ok("SELECT list_inner_product([1.0], [2.0])")) {
            d.dot_fn = "list_inner_product";
        } else {
            d.id = Dialect::Id::scalar;
            return Dialect::scalar();
        }
    }
    if (ok("SELECT list_transform([1.0], lambda x: x + 1)")) {
        d.lambda_arrow = false;
    } else if (ok("SELECT list_transform([1.0], x -> x + 1)")) {
        d.lambda_arrow = true;
    } else {
        return Dialect::scalar();
    }
    d.has_pivot_syntax =
        ok("SELECT * FROM (PIVOT (SELECT 1 AS r, 0 AS chunk_id, 2.0 AS v) ON chunk_id IN (0) "
           "USING first(v) GROUP BY r)");
    d.has_positional_join =
        ok("SELECT * FROM (SELECT 1 AS x) a POSITIONAL JOIN (SELECT 2 AS y) b");
    return d;
}

void Engine::load_table_file(const std::string &table, const std::string &file,
                             size_t n_key_cols, int64_t chunk_size) {
    // data files are '|'-separated; the vec field is a bracketed list that
    // the engine casts from text
    std::string cols;
    std::string sel;
    for (size_t i = 0; i < n_key_cols; ++i) {
        cols += fmt::format("'c{}': 'BIGINT', ", i);
        sel += fmt::format("c{}, ", i);
    }
    if (chunk_size == 1) {
        cols += fmt::format("'c{}': 'BIGINT', 'c{}': 'FLOAT'", n_key_cols, n_key_cols + 1);
        sel += fmt::format("c{}, c{}", n_key_cols, n_key_cols + 1);
    } else {
        cols += fmt::format("'c{}': 'BIGINT', 'c{}': 'VARCHAR'", n_key_cols, n_key_cols + 1);
        sel += fmt::format("c{}, CAST(c{} AS FLOAT[])", n_key_cols, n_key_cols + 1);
    }
    run(fmt::format("INSERT INTO {} SELECT {} FROM read_csv('{}', delim='|', header=false, "
                    "columns={{{}}})",
                    table, sel, file, cols));
}

} // namespace relic
