//===----------------------------------------------------------------------===//
//                         DuckDB
//
// duckdb/common/swap.hpp
//
//
//===----------------------------------------------------------------------===//

#pragma once

#include <utility>

namespace duckdb {
using std::swap;
}
