// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relic/dense.hpp"
#include "relic/sqlgen.hpp"

namespace relic {

struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thin wrapper around the embedded analytical database. One Engine per
// database file (or in-memory instance); statements run sequentially on a
// single connection.
class Engine {
public:
    // path empty = in-memory database
    explicit Engine(const std::string &path = "", const std::string &memory_limit = "");
    ~Engine();
    Engine(Engine &&) noexcept;
    Engine &operator=(Engine &&) noexcept;
    Engine(const Engine &) = delete;

    void run(const std::string &sql);                 // throws EngineError with statement text
    void run_script(const std::string &script_text);  // ';'-separated statements

    // query helpers for tests and the runtime
    std::vector<std::vector<double>> query_rows(const std::string &sql);
    std::vector<int64_t> query_int_column(const std::string &sql);
    int64_t query_int(const std::string &sql);
    double query_double(const std::string &sql);

    // Read a relation with integer key columns, a chunk/col column and a
    // vec/value column back into a dense tensor of the given shape.
    DenseTensor read_relation(const std::string &relation,
                              const std::vector<std::string> &key_cols, int64_t chunk_size,
                              const std::vector<int64_t> &shape, double fill = 0.0);

    // Probe engine capabilities and derive the array dialect settings.
    Dialect probe_dialect();

    void load_table_file(const std::string &table, const std::string &file,
                         size_t n_key_cols, int64_t chunk_size);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace relic
