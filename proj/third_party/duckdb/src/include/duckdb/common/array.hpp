//===----------------------------------------------------------------------===//
//                         DuckDB
//
// duckdb/common/array.hpp
//
//
//===----------------------------------------------------------------------===//

#pragma once

#include <array>

namespace duckdb {
using std::array;
}
