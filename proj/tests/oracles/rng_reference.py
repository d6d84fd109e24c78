#!/usr/bin/env python3
"""Reference outputs of splitmix64 and xoshiro256** (Blackman and Vigna's
published C code, transcribed), seeded the way the library seeds them."""
M = (1 << 64) - 1


def splitmix(x):
    x = (x + 0x9E3779B97F4A7C15) & M
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & M
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & M
    return x ^ (x >> 31)


def rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & M


def xoshiro(seed, count):
    s, z = [], seed
    for _ in range(4):
        z = (z + 0x9E3779B97F4A7C15) & M
        v = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M
        v = ((v ^ (v >> 27)) * 0x94D049BB133111EB) & M
        s.append(v ^ (v >> 31))
    out = []
    for _ in range(count):
        out.append((rotl((s[1] * 5) & M, 7) * 9) & M)
        t = (s[1] << 17) & M
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = rotl(s[3], 45)
    return out


print("splitmix64(0) = 0x%016X" % splitmix(0))
print("splitmix64(1) = 0x%016X" % splitmix(1))
for v in xoshiro(42, 3):
    print("xoshiro(42) -> 0x%016X" % v)
