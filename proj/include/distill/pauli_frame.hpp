// Copyright 2026 The Distill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DISTILL_PAULI_FRAME_HPP
#define DISTILL_PAULI_FRAME_HPP

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "distill/errors.hpp"
#include "distill/rng.hpp"

namespace distill {

inline constexpr int kMaxFrameSlots = 64;

inline std::uint64_t low_mask(int bits) { return bits >= 64 ? ~0ULL : ((1ULL << bits) - 1); }

/// Sign-free Pauli string over n pair slots. Slot i is X if only x bit i is set,
/// Z if only z bit i is set, Y if both.
struct PauliFrame {
    int n = 0;
    std::uint64_t x = 0;
    std::uint64_t z = 0;

    PauliFrame() = default;
    PauliFrame(int n_, std::uint64_t x_, std::uint64_t z_) : n(n_), x(x_), z(z_) {
        detail::require(n_ >= 1 && n_ <= kMaxFrameSlots, "frame size must lie in [1, 64]");
        detail::require(((x_ | z_) & ~low_mask(n_)) == 0, "frame mask exceeds its slot count");
    }

    static PauliFrame identity(int n) { return PauliFrame(n, 0, 0); }

    /// Parses strings over {I, X, Y, Z, _}; slot 0 is the first character.
    static PauliFrame from_string(std::string_view s) {
        PauliFrame p(static_cast<int>(s.size()), 0, 0);
        for (int i = 0; i < p.n; ++i) {
            p.set(i, s[i]);
        }
        return p;
    }

    char get(int i) const {
        static constexpr char kNames[] = {'I', 'X', 'Z', 'Y'};
        return kNames[((x >> i) & 1) | (((z >> i) & 1) << 1)];
    }

    void set(int i, char c) {
        std::uint64_t b = 1ULL << i;
        x &= ~b;
        z &= ~b;
        switch (c) {
            case 'I':
            case '_':
                break;
            case 'X':
                x |= b;
                break;
            case 'Y':
                x |= b;
                z |= b;
                break;
            case 'Z':
                z |= b;
                break;
            default:
                throw DomainError(std::string("bad Pauli character: ") + c);
        }
    }

    std::string str() const {
        std::string s(n, 'I');
        for (int i = 0; i < n; ++i) {
            s[i] = get(i);
        }
        return s;
    }

    int weight() const { return std::popcount(x | z); }
    bool is_identity() const { return (x | z) == 0; }

    PauliFrame &operator*=(const PauliFrame &o) {
        x ^= o.x;
        z ^= o.z;
        return *this;
    }
    friend PauliFrame operator*(PauliFrame a, const PauliFrame &b) { return a *= b; }
    friend bool operator==(const PauliFrame &a, const PauliFrame &b) {
        return a.n == b.n && a.x == b.x && a.z == b.z;
    }

    /// 1 if the two strings anticommute.
    friend int symplectic_product(const PauliFrame &a, const PauliFrame &b) {
        return std::popcount((a.x & b.z) ^ (a.z & b.x)) & 1;
    }
};

/// Binary symplectic matrix stored by columns: images of X_i and Z_i.
class SymplecticClifford {
   public:
    static SymplecticClifford identity(int n) {
        SymplecticClifford c(n);
        for (int i = 0; i < n; ++i) {
            c.x_image_[i] = PauliFrame(n, 1ULL << i, 0);
            c.z_image_[i] = PauliFrame(n, 0, 1ULL << i);
        }
        return c;
    }

    /// Builds from column images; throws unless the map preserves the symplectic form.
    static SymplecticClifford from_images(std::vector<PauliFrame> x_images, std::vector<PauliFrame> z_images) {
        detail::require(!x_images.empty() && x_images.size() == z_images.size(), "image lists must match");
        int n = static_cast<int>(x_images.size());
        SymplecticClifford c(n);
        for (int i = 0; i < n; ++i) {
            detail::require(x_images[i].n == n && z_images[i].n == n, "image frame size mismatch");
        }
        c.x_image_ = std::move(x_images);
        c.z_image_ = std::move(z_images);
        detail::require(c.is_symplectic(), "images do not preserve the symplectic form");
        return c;
    }

    int n() const { return n_; }
    const PauliFrame &x_image(int i) const { return x_image_[i]; }
    const PauliFrame &z_image(int i) const { return z_image_[i]; }

    /// S^T J S = J, checked column pair by column pair.
    bool is_symplectic() const {
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) {
                if (symplectic_product(x_image_[i], x_image_[j]) != 0 ||
                    symplectic_product(z_image_[i], z_image_[j]) != 0 ||
                    symplectic_product(x_image_[i], z_image_[j]) != (i == j ? 1 : 0)) {
                    return false;
                }
            }
        }
        return true;
    }

    PauliFrame apply(const PauliFrame &p) const {
        detail::require(p.n == n_, "frame size does not match Clifford");
        PauliFrame out(n_, 0, 0);
        for (std::uint64_t b = p.x; b != 0; b &= b - 1) {
            out *= x_image_[std::countr_zero(b)];
        }
        for (std::uint64_t b = p.z; b != 0; b &= b - 1) {
            out *= z_image_[std::countr_zero(b)];
        }
        return out;
    }

    /// Composition: (a * b).apply(p) == a.apply(b.apply(p)).
    friend SymplecticClifford operator*(const SymplecticClifford &a, const SymplecticClifford &b) {
        detail::require(a.n_ == b.n_, "Clifford size mismatch");
        SymplecticClifford c(a.n_);
        for (int i = 0; i < a.n_; ++i) {
            c.x_image_[i] = a.apply(b.x_image_[i]);
            c.z_image_[i] = a.apply(b.z_image_[i]);
        }
        return c;
    }

    friend bool operator==(const SymplecticClifford &a, const SymplecticClifford &b) {
        return a.n_ == b.n_ && a.x_image_ == b.x_image_ && a.z_image_ == b.z_image_;
    }

   private:
    explicit SymplecticClifford(int n) : n_(n), x_image_(n), z_image_(n) {
        detail::require(n >= 1 && n <= kMaxFrameSlots, "Clifford size must lie in [1, 64]");
    }

    template <typename Rng>
    friend SymplecticClifford sample_clifford(int n, Rng &rng);

    int n_;
    std::vector<PauliFrame> x_image_;
    std::vector<PauliFrame> z_image_;
};

inline PauliFrame conjugate(const SymplecticClifford &c, const PauliFrame &p) { return c.apply(p); }

namespace detail {

template <typename Rng>
PauliFrame random_frame(int n, Rng &rng) {
    std::uint64_t mask = low_mask(n);
    return PauliFrame(n, rng() & mask, rng() & mask);
}

}  // namespace detail

/// Uniform element of Sp(2n, 2) by drawing a random symplectic basis pair by pair.
/// Each new vector is projected onto the symplectic complement of the pairs fixed so far.
template <typename Rng>
SymplecticClifford sample_clifford(int n, Rng &rng) {
    SymplecticClifford c(n);
    auto project = [&](PauliFrame u, int pairs) {
        for (int j = 0; j < pairs; ++j) {
            const PauliFrame &e = c.x_image_[j];
            const PauliFrame &f = c.z_image_[j];
            int ue = symplectic_product(u, e);
            int uf = symplectic_product(u, f);
            if (uf) {
                u *= e;
            }
            if (ue) {
                u *= f;
            }
        }
        return u;
    };
    for (int i = 0; i < n; ++i) {
        PauliFrame e;
        do {
            e = project(detail::random_frame(n, rng), i);
        } while (e.is_identity());
        c.x_image_[i] = e;
        PauliFrame f;
        do {
            f = project(detail::random_frame(n, rng), i);
        } while (symplectic_product(e, f) == 0);
        c.z_image_[i] = f;
    }
    return c;
}

}  // namespace distill

#endif
