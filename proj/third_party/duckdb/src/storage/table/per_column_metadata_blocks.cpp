#include "duckdb/storage/table/per_column_metadata_blocks.hpp"
#include "duckdb/common/serializer/serializer.hpp"
#include "duckdb/common/serializer/deserializer.hpp"

namespace duckdb {

static constexpr idx_t COLUMN_INDEX_BIT = idx_t(1) << 63;

idx_t PerColumnMetadataBlock::GetPacked() {
	idx_t packed = index;
	if (is_column_index) {
		packed |= COLUMN_INDEX_BIT;
	}
	return packed;
}

PerColumnMetadataBlock PerColumnMetadataBlock::Unpack(idx_t packed) {
	PerColumnMetadataBlock result;
	result.is_column_index = (packed & COLUMN_INDEX_BIT) != 0;
	result.index = packed & ~COLUMN_INDEX_BIT;
	return result;
}

vector<vector<idx_t>> PerColumnMetadataBlocks::GetBlocksForColumns(const vector<idx_t> &columns) const {
	vector<vector<idx_t>> result(columns.size());
	if (columns.empty()) {
		return result;
	}
	idx_t col_pos = 0;
	bool collecting = false;
	for (auto &entry : data) {
		if (entry.is_column_index) {
			collecting = false;
			// skip past requested columns that are before the current entry
			while (col_pos < columns.size() && columns[col_pos] < entry.index) {
				col_pos++;
			}
			if (col_pos >= columns.size()) {
				break;
			}
			if (columns[col_pos] == entry.index) {
				collecting = true;
			}
		} else if (collecting) {
			result[col_pos].push_back(entry.index);
		}
	}
	return result;
}

void PerColumnMetadataBlocks::AddColumn(idx_t col_idx, const vector<idx_t> &blocks) {
	if (blocks.empty()) {
		return;
	}
#ifdef D_ASSERT_IS_ENABLED
	// assert sorted insertion: col_idx must be greater than the last column index
	for (idx_t i = data.size(); i > 0; i--) {
		if (data[i - 1].is_column_index) {
			D_ASSERT(col_idx > data[i - 1].index);
			break;
		}
	}
#endif
	PerColumnMetadataBlock marker;
	marker.is_column_index = true;
	marker.index = col_idx;
	data.push_back(marker);
	for (auto &block_id : blocks) {
		PerColumnMetadataBlock block;
		block.is_column_index = false;
		block.index = block_id;
		data.push_back(block);
	}
}

PerColumnMetadataBlocks PerColumnMetadataBlocks::Merge(const PerColumnMetadataBlocks &a,
                                                       const PerColumnMetadataBlocks &b) {
	PerColumnMetadataBlocks result;
	result.data.reserve(a.data.size() + b.data.size());
	idx_t ai = 0;
	idx_t bi = 0;
	// each marker is followed by its blocks until the next marker; data is sorted by column index
	while (ai < a.data.size() && bi < b.data.size()) {
		D_ASSERT(a.data[ai].is_column_index && b.data[bi].is_column_index);
		D_ASSERT(a.data[ai].index != b.data[bi].index);
		bool take_a = a.data[ai].index < b.data[bi].index;
		const auto &src = take_a ? a.data : b.data;
		idx_t &pos = take_a ? ai : bi;
		result.data.push_back(src[pos++]); // marker
		while (pos < src.size() && !src[pos].is_column_index) {
			result.data.push_back(src[pos++]);
		}
	}
	while (ai < a.data.size()) {
		result.data.push_back(a.data[ai++]);
	}
	while (bi < b.data.size()) {
		result.data.push_back(b.data[bi++]);
	}
	return result;
}

void PerColumnMetadataBlocks::ClearColumn(idx_t col_idx) {
	idx_t start = data.size();
	idx_t end = data.size();
	for (idx_t i = 0; i < data.size(); i++) {
		if (data[i].is_column_index && data[i].index == col_idx) {
			start = i;
			// find the end: next column marker or end of data
			end = data.size();
			for (idx_t j = i + 1; j < data.size(); j++) {
				if (data[j].is_column_index) {
					end = j;
					break;
				}
			}
			break;
		}
	}
	if (start < data.size()) {
		data.erase(data.begin() + NumericCast<int64_t>(start), data.begin() + NumericCast<int64_t>(end));
	}
}

void PerColumnMetadataBlocks::RemoveColumn(idx_t col_idx) {
	ClearColumn(col_idx);
	for (auto &entry : data) {
		if (entry.is_column_index && entry.index > col_idx) {
			entry.index--;
		}
	}
}

} // namespace duckdb
