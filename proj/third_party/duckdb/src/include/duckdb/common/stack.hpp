//===----------------------------------------------------------------------===//
//                         DuckDB
//
// duckdb/common/stack.hpp
//
//
//===----------------------------------------------------------------------===//

#pragma once

#include <stack>

namespace duckdb {
using std::stack;
}
