#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace splatsim {

// FNV-1a, used for cache keys and config fingerprints (not cryptographic).
inline uint64_t fnv1a64(std::string_view data, uint64_t seed = 0xcbf29ce484222325ull) {
    uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string to_hex(uint64_t value);

std::string base64_encode(std::string_view data);

std::string to_lower(std::string_view s);

// Splits into lowercase alphanumeric tokens ("Wooden-Chair" -> {wooden, chair}).
std::vector<std::string> tokenize(std::string_view text);

// Token match used for caption/material scoring: exact, or one token is a
// prefix of the other with at least 4 shared characters (wood ~ wooden).
bool tokens_match(const std::string& a, const std::string& b);

// Fraction of `name` tokens that match some token of `text`.
double token_overlap_score(const std::string& text, const std::string& name);

}  // namespace splatsim
