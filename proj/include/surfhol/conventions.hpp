#pragma once

#include <string>
#include <vector>

namespace surfhol {

/// One orientation, ordering or sign choice the library commits to. The same
/// entries are described at length in CONVENTIONS.md.
struct ConventionEntry {
  std::string id;
  std::string text;
};

const std::vector<ConventionEntry>& convention_ledger();

/// Throws UsageError for an unknown id.
const ConventionEntry& convention(const std::string& id);

}  // namespace surfhol
