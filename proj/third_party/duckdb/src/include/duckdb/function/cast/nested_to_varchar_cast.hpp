#pragma once

namespace duckdb {

struct NestedToVarcharCast {
public:
	static const bool LOOKUP_TABLE[256];
};

} // namespace duckdb
