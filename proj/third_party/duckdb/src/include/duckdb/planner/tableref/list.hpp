#include "duckdb/planner/tableref/bound_joinref.hpp"
#include "duckdb/planner/tableref/bound_pivotref.hpp"
