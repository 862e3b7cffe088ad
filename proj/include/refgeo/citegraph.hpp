#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "refgeo/corpus.hpp"

namespace refgeo {

// Inbound citation counts, indexed by article position in the corpus.
struct CitationCounts {
  std::vector<std::uint32_t> inbound;
};

struct CitingWindow {
  int min_year = std::numeric_limits<int>::min();
  int max_year = std::numeric_limits<int>::max();

  bool contains(int y) const { return y >= min_year && y <= max_year; }
};

// count(a) = number of citing articles (publication year in the window) with
// at least one resolved reference to a. Several references from one citing
// article to the same target count once.
CitationCounts invert_citations(const Corpus& corpus, CitingWindow window = {});

// (subject category, publication year) cell key.
using CellKey = std::pair<std::string, int>;

std::string cell_key_label(const CellKey& k);  // "CAT:2005"

struct Cell {
  CellKey key;
  std::vector<std::uint32_t> members;  // article indices, document type article only
};

// Cells sorted by key; an article with k categories appears in k cells.
struct CellPartition {
  std::vector<Cell> cells;
};

CellPartition cell_partition(const Corpus& corpus);

enum class TiePolicy : std::uint8_t { IncludeTies, StrictRank };

struct EliteSet {
  double fraction = 0.01;
  TiePolicy tie_policy = TiePolicy::IncludeTies;
  std::vector<std::uint32_t> elite_indices;            // ascending
  std::vector<char> is_elite;                          // per article index
  std::map<CellKey, std::uint32_t> cell_thresholds;    // minimal admitted count
  std::map<CellKey, std::uint32_t> cell_sizes;
  // qualifying cells per elite article index, each sorted by key
  std::map<std::uint32_t, std::vector<CellKey>> qualifying_cells;

  bool contains(std::uint32_t article_index) const {
    return article_index < is_elite.size() && is_elite[article_index];
  }
};

// Per cell of size N: k = ceil(fraction*N); rank by inbound count descending,
// ties by ascending article id. StrictRank admits exactly the first k;
// IncludeTies admits every article whose count >= the k-th ranked count.
// An article is elite when admitted in at least one cell.
// fraction outside (0,1] -> std::invalid_argument.
EliteSet elite_select(const CellPartition& cells, const CitationCounts& counts,
                      const Corpus& corpus, double fraction,
                      TiePolicy tie_policy);

// Two-column table: article id, comma-joined qualifying cells. Rows sorted by
// id.
std::string elite_table(const EliteSet& elite, const Corpus& corpus);

// Ids from the first column of an elite_table payload.
std::vector<std::string> parse_elite_table_ids(const std::string& table);

}  // namespace refgeo
