#include "pgsnf/sha256.hpp"

#include <gmpxx.h>

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>

namespace pgsnf {

namespace {

// The round constants are the first 32 fractional bits of the cube roots of
// the first 64 primes, and the initial state comes from the square roots of
// the first 8 primes.  Deriving them with exact integer roots avoids
// hand-transcription.
struct Tables {
    std::array<std::uint32_t, 64> k;
    std::array<std::uint32_t, 8> h0;

    Tables() {
        int found = 0;
        mpz_class root;
        for (long n = 2; found < 64; ++n) {
            bool prime = true;
            for (long d = 2; d * d <= n && prime; ++d) prime = n % d != 0;
            if (!prime) continue;
            mpz_class shifted = mpz_class(n) << 96;  // floor(cbrt(n) * 2^32)
            mpz_root(root.get_mpz_t(), shifted.get_mpz_t(), 3);
            k[found] = static_cast<std::uint32_t>(mpz_class(root & 0xffffffff).get_ui());
            if (found < 8) {
                shifted = mpz_class(n) << 64;  // floor(sqrt(n) * 2^32)
                mpz_sqrt(root.get_mpz_t(), shifted.get_mpz_t());
                h0[found] = static_cast<std::uint32_t>(mpz_class(root & 0xffffffff).get_ui());
            }
            ++found;
        }
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

void compress(std::array<std::uint32_t, 8>& h, const unsigned char* block) {
    const auto& tab = tables();
    std::uint32_t w[64];
    for (int i = 0; i < 16; ++i)
        w[i] = (std::uint32_t{block[4 * i]} << 24) | (std::uint32_t{block[4 * i + 1]} << 16) |
               (std::uint32_t{block[4 * i + 2]} << 8) | std::uint32_t{block[4 * i + 3]};
    for (int i = 16; i < 64; ++i) {
        const std::uint32_t s0 = std::rotr(w[i - 15], 7) ^ std::rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
        const std::uint32_t s1 = std::rotr(w[i - 2], 17) ^ std::rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
        w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    auto [a, b, c, d, e, f, g, hh] = h;
    for (int i = 0; i < 64; ++i) {
        const std::uint32_t big_s1 = std::rotr(e, 6) ^ std::rotr(e, 11) ^ std::rotr(e, 25);
        const std::uint32_t ch = (e & f) ^ (~e & g);
        const std::uint32_t t1 = hh + big_s1 + ch + tab.k[i] + w[i];
        const std::uint32_t big_s0 = std::rotr(a, 2) ^ std::rotr(a, 13) ^ std::rotr(a, 22);
        const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
        const std::uint32_t t2 = big_s0 + maj;
        hh = g;
        g = f;
        f = e;
        e = d + t1;
        d = c;
        c = b;
        b = a;
        a = t1 + t2;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
    h[5] += f;
    h[6] += g;
    h[7] += hh;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
    std::array<std::uint32_t, 8> h = tables().h0;
    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
    const std::size_t n = data.size();
    std::size_t off = 0;
    for (; off + 64 <= n; off += 64) compress(h, bytes + off);

    unsigned char tail[128] = {0};
    const std::size_t rem = n - off;
    if (rem > 0) std::memcpy(tail, bytes + off, rem);
    tail[rem] = 0x80;
    const std::size_t tail_len = rem + 9 <= 64 ? 64 : 128;
    const std::uint64_t bits = static_cast<std::uint64_t>(n) * 8;
    for (int i = 0; i < 8; ++i) tail[tail_len - 1 - i] = static_cast<unsigned char>(bits >> (8 * i));
    compress(h, tail);
    if (tail_len == 128) compress(h, tail + 64);

    static const char* hex = "0123456789abcdef";
    std::string out(64, '0');
    for (int i = 0; i < 8; ++i)
        for (int b = 0; b < 4; ++b) {
            const unsigned byte = (h[i] >> (24 - 8 * b)) & 0xffu;
            out[8 * i + 2 * b] = hex[byte >> 4];
            out[8 * i + 2 * b + 1] = hex[byte & 0xf];
        }
    return out;
}

}  // namespace pgsnf
