// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <mptlab/keccak.hpp>

#include <cstring>

#if defined(__x86_64__)
#include <immintrin.h>
#endif

namespace mptlab
{
namespace
{
constexpr size_t kRate = 136;  // 1088-bit rate for 256-bit output

constexpr uint64_t kRoundConstants[24] = {
    0x0000000000000001ull, 0x0000000000008082ull, 0x800000000000808aull, 0x8000000080008000ull,
    0x000000000000808bull, 0x0000000080000001ull, 0x8000000080008081ull, 0x8000000000008009ull,
    0x000000000000008aull, 0x0000000000000088ull, 0x0000000080008009ull, 0x000000008000000aull,
    0x000000008000808bull, 0x800000000000008bull, 0x8000000000008089ull, 0x8000000000008003ull,
    0x8000000000008002ull, 0x8000000000000080ull, 0x000000000000800aull, 0x800000008000000aull,
    0x8000000080008081ull, 0x8000000000008080ull, 0x0000000080000001ull, 0x8000000080008008ull};

inline uint64_t rol(uint64_t x, unsigned n) noexcept
{
    return (x << n) | (x >> (64 - n));
}

void keccak_f1600(uint64_t* s) noexcept
{
    uint64_t Aba = s[0], Abe = s[1], Abi = s[2], Abo = s[3], Abu = s[4];
    uint64_t Aga = s[5], Age = s[6], Agi = s[7], Ago = s[8], Agu = s[9];
    uint64_t Aka = s[10], Ake = s[11], Aki = s[12], Ako = s[13], Aku = s[14];
    uint64_t Ama = s[15], Ame = s[16], Ami = s[17], Amo = s[18], Amu = s[19];
    uint64_t Asa = s[20], Ase = s[21], Asi = s[22], Aso = s[23], Asu = s[24];

    for (int round = 0; round < 24; ++round)
    {
        // theta
        const uint64_t C0 = Aba ^ Aga ^ Aka ^ Ama ^ Asa;
        const uint64_t C1 = Abe ^ Age ^ Ake ^ Ame ^ Ase;
        const uint64_t C2 = Abi ^ Agi ^ Aki ^ Ami ^ Asi;
        const uint64_t C3 = Abo ^ Ago ^ Ako ^ Amo ^ Aso;
        const uint64_t C4 = Abu ^ Agu ^ Aku ^ Amu ^ Asu;

        const uint64_t D0 = C4 ^ rol(C1, 1);
        const uint64_t D1 = C0 ^ rol(C2, 1);
        const uint64_t D2 = C1 ^ rol(C3, 1);
        const uint64_t D3 = C2 ^ rol(C4, 1);
        const uint64_t D4 = C3 ^ rol(C0, 1);

        Aba ^= D0; Aga ^= D0; Aka ^= D0; Ama ^= D0; Asa ^= D0;
        Abe ^= D1; Age ^= D1; Ake ^= D1; Ame ^= D1; Ase ^= D1;
        Abi ^= D2; Agi ^= D2; Aki ^= D2; Ami ^= D2; Asi ^= D2;
        Abo ^= D3; Ago ^= D3; Ako ^= D3; Amo ^= D3; Aso ^= D3;
        Abu ^= D4; Agu ^= D4; Aku ^= D4; Amu ^= D4; Asu ^= D4;

        // rho + pi
        const uint64_t B0 = Aba;
        const uint64_t B1 = rol(Age, 44);
        const uint64_t B2 = rol(Aki, 43);
        const uint64_t B3 = rol(Amo, 21);
        const uint64_t B4 = rol(Asu, 14);
        const uint64_t B5 = rol(Abo, 28);
        const uint64_t B6 = rol(Agu, 20);
        const uint64_t B7 = rol(Aka, 3);
        const uint64_t B8 = rol(Ame, 45);
        const uint64_t B9 = rol(Asi, 61);
        const uint64_t B10 = rol(Abe, 1);
        const uint64_t B11 = rol(Agi, 6);
        const uint64_t B12 = rol(Ako, 25);
        const uint64_t B13 = rol(Amu, 8);
        const uint64_t B14 = rol(Asa, 18);
        const uint64_t B15 = rol(Abu, 27);
        const uint64_t B16 = rol(Aga, 36);
        const uint64_t B17 = rol(Ake, 10);
        const uint64_t B18 = rol(Ami, 15);
        const uint64_t B19 = rol(Aso, 56);
        const uint64_t B20 = rol(Abi, 62);
        const uint64_t B21 = rol(Ago, 55);
        const uint64_t B22 = rol(Aku, 39);
        const uint64_t B23 = rol(Ama, 41);
        const uint64_t B24 = rol(Ase, 2);

        // chi
        Aba = B0 ^ (~B1 & B2);
        Abe = B1 ^ (~B2 & B3);
        Abi = B2 ^ (~B3 & B4);
        Abo = B3 ^ (~B4 & B0);
        Abu = B4 ^ (~B0 & B1);
        Aga = B5 ^ (~B6 & B7);
        Age = B6 ^ (~B7 & B8);
        Agi = B7 ^ (~B8 & B9);
        Ago = B8 ^ (~B9 & B5);
        Agu = B9 ^ (~B5 & B6);
        Aka = B10 ^ (~B11 & B12);
        Ake = B11 ^ (~B12 & B13);
        Aki = B12 ^ (~B13 & B14);
        Ako = B13 ^ (~B14 & B10);
        Aku = B14 ^ (~B10 & B11);
        Ama = B15 ^ (~B16 & B17);
        Ame = B16 ^ (~B17 & B18);
        Ami = B17 ^ (~B18 & B19);
        Amo = B18 ^ (~B19 & B15);
        Amu = B19 ^ (~B15 & B16);
        Asa = B20 ^ (~B21 & B22);
        Ase = B21 ^ (~B22 & B23);
        Asi = B22 ^ (~B23 & B24);
        Aso = B23 ^ (~B24 & B20);
        Asu = B24 ^ (~B20 & B21);

        // iota
        Aba ^= kRoundConstants[round];
    }

    s[0] = Aba; s[1] = Abe; s[2] = Abi; s[3] = Abo; s[4] = Abu;
    s[5] = Aga; s[6] = Age; s[7] = Agi; s[8] = Ago; s[9] = Agu;
    s[10] = Aka; s[11] = Ake; s[12] = Aki; s[13] = Ako; s[14] = Aku;
    s[15] = Ama; s[16] = Ame; s[17] = Ami; s[18] = Amo; s[19] = Amu;
    s[20] = Asa; s[21] = Ase; s[22] = Asi; s[23] = Aso; s[24] = Asu;
}
}  // namespace

void keccak256(const uint8_t* data, size_t size, Digest& out) noexcept
{
    uint64_t state[25] = {};
    uint8_t block[kRate];

    while (size >= kRate)
    {
        for (int i = 0; i < 17; ++i)
        {
            uint64_t lane;
            std::memcpy(&lane, data + 8 * i, 8);
            state[i] ^= lane;
        }
        keccak_f1600(state);
        data += kRate;
        size -= kRate;
    }

    if (size != 0)
        std::memcpy(block, data, size);
    std::memset(block + size, 0, kRate - size);
    block[size] = 0x01;
    block[kRate - 1] |= 0x80;
    for (int i = 0; i < 17; ++i)
    {
        uint64_t lane;
        std::memcpy(&lane, block + 8 * i, 8);
        state[i] ^= lane;
    }
    keccak_f1600(state);

    std::memcpy(out.data(), state, 32);
}

const Digest& keccak256_empty() noexcept
{
    static const Digest empty = keccak256(nullptr, 0);
    return empty;
}

#if defined(__x86_64__)

namespace
{
__attribute__((target("avx512f"))) inline __m512i vxor(__m512i a, __m512i b) noexcept
{
    return _mm512_xor_si512(a, b);
}

__attribute__((target("avx512f"))) void keccak_f1600_x8(__m512i* s) noexcept
{
#define KROL(x, n) _mm512_rol_epi64(x, n)
    __m512i Aba = s[0], Abe = s[1], Abi = s[2], Abo = s[3], Abu = s[4];
    __m512i Aga = s[5], Age = s[6], Agi = s[7], Ago = s[8], Agu = s[9];
    __m512i Aka = s[10], Ake = s[11], Aki = s[12], Ako = s[13], Aku = s[14];
    __m512i Ama = s[15], Ame = s[16], Ami = s[17], Amo = s[18], Amu = s[19];
    __m512i Asa = s[20], Ase = s[21], Asi = s[22], Aso = s[23], Asu = s[24];

    for (int round = 0; round < 24; ++round)
    {
        const __m512i C0 = vxor(vxor(vxor(Aba, Aga), vxor(Aka, Ama)), Asa);
        const __m512i C1 = vxor(vxor(vxor(Abe, Age), vxor(Ake, Ame)), Ase);
        const __m512i C2 = vxor(vxor(vxor(Abi, Agi), vxor(Aki, Ami)), Asi);
        const __m512i C3 = vxor(vxor(vxor(Abo, Ago), vxor(Ako, Amo)), Aso);
        const __m512i C4 = vxor(vxor(vxor(Abu, Agu), vxor(Aku, Amu)), Asu);

        const __m512i D0 = vxor(C4, KROL(C1, 1));
        const __m512i D1 = vxor(C0, KROL(C2, 1));
        const __m512i D2 = vxor(C1, KROL(C3, 1));
        const __m512i D3 = vxor(C2, KROL(C4, 1));
        const __m512i D4 = vxor(C3, KROL(C0, 1));

        Aba = vxor(Aba, D0); Aga = vxor(Aga, D0); Aka = vxor(Aka, D0);
        Ama = vxor(Ama, D0); Asa = vxor(Asa, D0);
        Abe = vxor(Abe, D1); Age = vxor(Age, D1); Ake = vxor(Ake, D1);
        Ame = vxor(Ame, D1); Ase = vxor(Ase, D1);
        Abi = vxor(Abi, D2); Agi = vxor(Agi, D2); Aki = vxor(Aki, D2);
        Ami = vxor(Ami, D2); Asi = vxor(Asi, D2);
        Abo = vxor(Abo, D3); Ago = vxor(Ago, D3); Ako = vxor(Ako, D3);
        Amo = vxor(Amo, D3); Aso = vxor(Aso, D3);
        Abu = vxor(Abu, D4); Agu = vxor(Agu, D4); Aku = vxor(Aku, D4);
        Amu = vxor(Amu, D4); Asu = vxor(Asu, D4);

        const __m512i B0 = Aba;
        const __m512i B1 = KROL(Age, 44);
        const __m512i B2 = KROL(Aki, 43);
        const __m512i B3 = KROL(Amo, 21);
        const __m512i B4 = KROL(Asu, 14);
        const __m512i B5 = KROL(Abo, 28);
        const __m512i B6 = KROL(Agu, 20);
        const __m512i B7 = KROL(Aka, 3);
        const __m512i B8 = KROL(Ame, 45);
        const __m512i B9 = KROL(Asi, 61);
        const __m512i B10 = KROL(Abe, 1);
        const __m512i B11 = KROL(Agi, 6);
        const __m512i B12 = KROL(Ako, 25);
        const __m512i B13 = KROL(Amu, 8);
        const __m512i B14 = KROL(Asa, 18);
        const __m512i B15 = KROL(Abu, 27);
        const __m512i B16 = KROL(Aga, 36);
        const __m512i B17 = KROL(Ake, 10);
        const __m512i B18 = KROL(Ami, 15);
        const __m512i B19 = KROL(Aso, 56);
        const __m512i B20 = KROL(Abi, 62);
        const __m512i B21 = KROL(Ago, 55);
        const __m512i B22 = KROL(Aku, 39);
        const __m512i B23 = KROL(Ama, 41);
        const __m512i B24 = KROL(Ase, 2);

        Aba = vxor(B0, _mm512_andnot_si512(B1, B2));
        Abe = vxor(B1, _mm512_andnot_si512(B2, B3));
        Abi = vxor(B2, _mm512_andnot_si512(B3, B4));
        Abo = vxor(B3, _mm512_andnot_si512(B4, B0));
        Abu = vxor(B4, _mm512_andnot_si512(B0, B1));
        Aga = vxor(B5, _mm512_andnot_si512(B6, B7));
        Age = vxor(B6, _mm512_andnot_si512(B7, B8));
        Agi = vxor(B7, _mm512_andnot_si512(B8, B9));
        Ago = vxor(B8, _mm512_andnot_si512(B9, B5));
        Agu = vxor(B9, _mm512_andnot_si512(B5, B6));
        Aka = vxor(B10, _mm512_andnot_si512(B11, B12));
        Ake = vxor(B11, _mm512_andnot_si512(B12, B13));
        Aki = vxor(B12, _mm512_andnot_si512(B13, B14));
        Ako = vxor(B13, _mm512_andnot_si512(B14, B10));
        Aku = vxor(B14, _mm512_andnot_si512(B10, B11));
        Ama = vxor(B15, _mm512_andnot_si512(B16, B17));
        Ame = vxor(B16, _mm512_andnot_si512(B17, B18));
        Ami = vxor(B17, _mm512_andnot_si512(B18, B19));
        Amo = vxor(B18, _mm512_andnot_si512(B19, B15));
        Amu = vxor(B19, _mm512_andnot_si512(B15, B16));
        Asa = vxor(B20, _mm512_andnot_si512(B21, B22));
        Ase = vxor(B21, _mm512_andnot_si512(B22, B23));
        Asi = vxor(B22, _mm512_andnot_si512(B23, B24));
        Aso = vxor(B23, _mm512_andnot_si512(B24, B20));
        Asu = vxor(B24, _mm512_andnot_si512(B20, B21));

        Aba = vxor(Aba, _mm512_set1_epi64(static_cast<long long>(kRoundConstants[round])));
    }

    s[0] = Aba; s[1] = Abe; s[2] = Abi; s[3] = Abo; s[4] = Abu;
    s[5] = Aga; s[6] = Age; s[7] = Agi; s[8] = Ago; s[9] = Agu;
    s[10] = Aka; s[11] = Ake; s[12] = Aki; s[13] = Ako; s[14] = Aku;
    s[15] = Ama; s[16] = Ame; s[17] = Ami; s[18] = Amo; s[19] = Amu;
    s[20] = Asa; s[21] = Ase; s[22] = Asi; s[23] = Aso; s[24] = Asu;
#undef KROL
}

__attribute__((target("avx512f"))) void keccak256_x8_avx512(
    const uint8_t* const inputs[kKeccakBatch], size_t size, Digest outs[kKeccakBatch]) noexcept
{
    alignas(64) uint64_t lanes[17][kKeccakBatch];
    uint8_t padded[kRate];
    for (size_t j = 0; j < kKeccakBatch; ++j)
    {
        std::memcpy(padded, inputs[j], size);
        std::memset(padded + size, 0, kRate - size);
        padded[size] = 0x01;
        padded[kRate - 1] |= 0x80;
        for (int i = 0; i < 17; ++i)
        {
            uint64_t lane;
            std::memcpy(&lane, padded + 8 * i, 8);
            lanes[i][j] = lane;
        }
    }

    __m512i state[25];
    for (int i = 0; i < 17; ++i)
        state[i] = _mm512_load_si512(lanes[i]);
    for (int i = 17; i < 25; ++i)
        state[i] = _mm512_setzero_si512();

    keccak_f1600_x8(state);

    alignas(64) uint64_t out_lanes[4][kKeccakBatch];
    for (int i = 0; i < 4; ++i)
        _mm512_store_si512(out_lanes[i], state[i]);
    for (size_t j = 0; j < kKeccakBatch; ++j)
        for (int i = 0; i < 4; ++i)
            std::memcpy(outs[j].data() + 8 * i, &out_lanes[i][j], 8);
}

bool avx512_available() noexcept
{
    return __builtin_cpu_supports("avx512f");
}
}  // namespace

void keccak256_batch(const uint8_t* const inputs[kKeccakBatch], size_t size,
    Digest outs[kKeccakBatch]) noexcept
{
    static const bool use_avx512 = avx512_available();
    if (use_avx512 && size < kRate)
    {
        keccak256_x8_avx512(inputs, size, outs);
        return;
    }
    for (size_t j = 0; j < kKeccakBatch; ++j)
        keccak256(inputs[j], size, outs[j]);
}

#else

void keccak256_batch(const uint8_t* const inputs[kKeccakBatch], size_t size,
    Digest outs[kKeccakBatch]) noexcept
{
    for (size_t j = 0; j < kKeccakBatch; ++j)
        keccak256(inputs[j], size, outs[j]);
}

#endif

}  // namespace mptlab
