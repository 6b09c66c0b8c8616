#pragma once
// Shared protocol-level types: inputs, outcomes, protocol tags.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "matchsim/matchings.hpp"
#include "matchsim/rng.hpp"

namespace matchsim {

enum class Protocol { kHiddenMatching, kSamplingMatching };

std::string_view to_string(Protocol p);
Protocol protocol_from_string(std::string_view s);

class BitString {
  public:
    BitString() = default;
    explicit BitString(std::vector<std::uint8_t> bits);

    static BitString zeros(int n);
    static BitString random(int n, Rng& rng);
    static BitString parse(std::string_view s);  // characters '0' / '1'

    int size() const { return static_cast<int>(bits_.size()); }
    int bit(int index0) const { return bits_[static_cast<std::size_t>(index0)]; }
    std::string to_string() const;

    friend bool operator==(const BitString&, const BitString&) = default;

  private:
    std::vector<std::uint8_t> bits_;
};

// Parity x_k xor x_l of a 1-based edge.
int parity(const BitString& x, Edge e);

struct ProtocolOutcome {
    Edge edge;
    int matching_index = 0;  // matching containing `edge`
    int parity = 0;
    bool guessed = false;  // true when produced by a random guess
    friend bool operator==(const ProtocolOutcome&, const ProtocolOutcome&) = default;
};

}  // namespace matchsim
