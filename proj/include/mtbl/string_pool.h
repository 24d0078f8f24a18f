#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <string_view>
#include <unordered_map>

namespace mtbl {

// Interns token values to dense ids so matching and scoring compare integers.
// Id 0 is always the out-of-sentence boundary value.
class StringPool {
 public:
  static constexpr uint32_t kOob = 0;
  static constexpr uint32_t kUnset = UINT32_MAX;
  static constexpr const char* kOobText = "_OOB_";

  StringPool() { intern(kOobText); }

  StringPool(const StringPool& other) : strings_(other.strings_) { reindex(); }
  StringPool& operator=(const StringPool& other) {
    if (this != &other) {
      strings_ = other.strings_;
      reindex();
    }
    return *this;
  }
  StringPool(StringPool&&) = default;
  StringPool& operator=(StringPool&&) = default;

  uint32_t intern(std::string_view s) {
    auto it = ids_.find(s);
    if (it != ids_.end()) return it->second;
    strings_.emplace_back(s);
    uint32_t id = static_cast<uint32_t>(strings_.size() - 1);
    ids_.emplace(strings_.back(), id);
    return id;
  }

  // UINT32_MAX - 1 when absent: a valid id never equals it, so lookups of
  // values the corpus has never seen match nothing.
  uint32_t find(std::string_view s) const {
    auto it = ids_.find(s);
    return it == ids_.end() ? kUnset - 1 : it->second;
  }

  const std::string& text(uint32_t id) const { return strings_[id]; }
  size_t size() const { return strings_.size(); }

 private:
  void reindex() {
    ids_.clear();
    for (uint32_t i = 0; i < strings_.size(); ++i) ids_.emplace(strings_[i], i);
  }

  std::deque<std::string> strings_;  // deque: stable storage for the view keys
  std::unordered_map<std::string_view, uint32_t> ids_;
};

}  // namespace mtbl
