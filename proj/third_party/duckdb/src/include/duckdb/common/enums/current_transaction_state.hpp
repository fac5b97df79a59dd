//===----------------------------------------------------------------------===//
//                         DuckDB
//
// duckdb/common/enums/current_transaction_state.hpp
//
//
//===----------------------------------------------------------------------===//

#pragma once

namespace duckdb {

enum CurrentTransactionState { IN_ACTIVE_TRANSACTION, NOT_IN_ACTIVE_TRANSACTION };

} // namespace duckdb
