#include "matchsim/protocol.hpp"

#include <stdexcept>

namespace matchsim {

std::string_view to_string(Protocol p) {
    switch (p) {
        case Protocol::kHiddenMatching: return "hm";
        case Protocol::kSamplingMatching: return "sm";
    }
    throw std::logic_error("unknown protocol");
}

Protocol protocol_from_string(std::string_view s) {
    if (s == "hm") return Protocol::kHiddenMatching;
    if (s == "sm") return Protocol::kSamplingMatching;
    throw std::invalid_argument("unknown protocol '" + std::string(s) +
                                "', expected hm or sm");
}

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_)
        if (b > 1) throw std::invalid_argument("bit values must be 0 or 1");
}

BitString BitString::zeros(int n) {
    if (n < 0) throw std::invalid_argument("negative length");
    BitString x;
    x.bits_.assign(static_cast<std::size_t>(n), 0);
    return x;
}

BitString BitString::random(int n, Rng& rng) {
    if (n < 0) throw std::invalid_argument("negative length");
    BitString x;
    x.bits_.resize(static_cast<std::size_t>(n));
    // 64 bits per engine draw
    std::uint64_t word = 0;
    int left = 0;
    for (auto& b : x.bits_) {
        if (left == 0) {
            word = rng();
            left = 64;
        }
        b = static_cast<std::uint8_t>(word & 1u);
        word >>= 1;
        --left;
    }
    return x;
}

BitString BitString::parse(std::string_view s) {
    BitString x;
    x.bits_.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("bit string may contain only 0/1");
        x.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return x;
}

std::string BitString::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
    return s;
}

int parity(const BitString& x, Edge e) {
    if (e.k < 1 || e.l < 1 || e.k > x.size() || e.l > x.size())
        throw std::invalid_argument("edge endpoint outside bit string");
    return x.bit(e.k - 1) ^ x.bit(e.l - 1);
}

}  // namespace matchsim
