#pragma once

#include <optional>

#include "delex/corpus.hpp"

namespace delex {

struct Posting {
  std::uint32_t sentence;
  std::uint32_t position;
  bool operator==(const Posting&) const = default;
};

// Per-token occurrence statistics over a Corpus. Postings are stored in CSR
// layout, sorted by (sentence, position). Construction is deterministic:
// building twice from the same corpus yields equal indexes.
class CorpusIndex {
 public:
  static CorpusIndex build(const Corpus& corpus);

  std::size_t sentence_count() const { return sentence_count_; }
  std::uint64_t token_total() const { return token_total_; }
  std::size_t vocab_size() const { return containment_.size(); }

  // Number of distinct sentences containing the token.
  std::uint32_t containment(TokenId id) const { return containment_[id]; }
  // Total occurrence count.
  std::uint32_t occurrences(TokenId id) const { return occurrences_[id]; }
  std::span<const Posting> postings(TokenId id) const {
    return {postings_.data() + offsets_[id], postings_.data() + offsets_[id + 1]};
  }

  // Cache file keyed by (source digest, tokenizer config). Saving the same
  // index twice produces bit-identical files.
  void save_cache(const std::string& path, const Corpus& corpus) const;

  // Returns nullopt (and a reason) when the file is absent, corrupted, or
  // keyed to a different corpus or tokenizer; callers rebuild in that case.
  static std::optional<CorpusIndex> load_cache(const std::string& path, const Corpus& corpus,
                                               std::string* why_miss = nullptr);

  bool operator==(const CorpusIndex&) const = default;

 private:
  std::uint64_t sentence_count_ = 0;
  std::uint64_t token_total_ = 0;
  std::vector<std::uint32_t> containment_;
  std::vector<std::uint32_t> occurrences_;
  std::vector<std::uint64_t> offsets_;  // size vocab+1
  std::vector<Posting> postings_;
};

}  // namespace delex
