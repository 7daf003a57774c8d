"""Seeded synthetic password corpora matching published per-dataset statistics.

A CorpusPreset pins the top-10 passwords with their occurrence shares, any
known length and composition shares, and a strong-password injection rate.
generate() emits exactly `size` occurrences: the top-10 literals at
largest-remainder-rounded multiplicities, a strong slice (length >= 9 with
3+ character classes) so both strength labels are always present, and weak
filler steered so every declared length/composition share is met exactly at
the quota level (sampling noise only enters through string collisions).
Everything derives from one seeded generator, so a (preset, seed, size)
triple reproduces the corpus byte for byte.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .analytics import ALL_SIGNATURES, composition_signature
from .chars import CLASS_ALPHABETS
from .corpus import CleanPassword

MIN_SIZE = 1_000

# Relative length weights for corpus mass whose length the preset leaves
# unstated; renormalized over the unstated lengths only.
DEFAULT_LENGTH_WEIGHTS = {
    4: 0.6, 5: 1.2, 6: 9.0, 7: 13.0, 8: 14.0, 9: 11.0, 10: 9.5, 11: 8.0,
    12: 5.0, 13: 3.0, 14: 2.0, 15: 1.2, 16: 0.8, 17: 0.5, 18: 0.35,
    19: 0.25, 20: 0.2,
}

# Relative composition weights for weak filler mass not pinned by the preset.
# Multi-class signatures here stay weak because they are only generated at
# lengths below 9.
DEFAULT_WEAK_COMP_WEIGHTS = {
    "D": 40.0, "DL": 30.0, "L": 12.0, "UL": 3.5, "DU": 3.0, "DUL": 3.0,
    "DLS": 1.6, "DS": 1.5, "LS": 1.2, "DUS": 1.2, "DULS": 1.0, "ULS": 0.7,
    "U": 0.6, "US": 0.5, "S": 0.2,
}

STRONG_COMP_WEIGHTS = {"DUL": 45.0, "DULS": 25.0, "DLS": 15.0, "ULS": 8.0, "DUS": 7.0}


class PresetError(ValueError):
    """A preset is internally inconsistent."""


@dataclass(frozen=True)
class CorpusPreset:
    name: str
    top10: tuple[tuple[str, float], ...]
    top10_total_share: float
    length_shares: dict[int, float] = field(default_factory=dict)
    composition_shares: dict[str, float] = field(default_factory=dict)
    size: int = 100_000
    seed: int = 42
    strong_rate: float = 0.05

    def __post_init__(self) -> None:
        if not self.top10:
            raise PresetError("top10 must be non-empty")
        texts = [t for t, _ in self.top10]
        if len(set(texts)) != len(texts):
            raise PresetError("top10 passwords must be unique")
        shares = [s for _, s in self.top10]
        if any(not 0 <= s <= 1 for s in shares) or not 0 <= self.top10_total_share <= 1:
            raise PresetError("shares must lie in [0, 1]")
        if abs(sum(shares) - self.top10_total_share) > 1e-6:
            raise PresetError(
                f"top10 shares sum to {sum(shares):.6f}, expected {self.top10_total_share:.6f}"
            )
        if any(not 0 <= s <= 1 for s in self.length_shares.values()):
            raise PresetError("length shares must lie in [0, 1]")
        if any(not (4 <= length <= 20) for length in self.length_shares):
            raise PresetError("length shares must cover lengths 4..20 only")
        if any(not 0 <= s <= 1 for s in self.composition_shares.values()):
            raise PresetError("composition shares must lie in [0, 1]")
        if sum(self.length_shares.values()) > 1 + 1e-9:
            raise PresetError("length shares exceed 1")
        if sum(self.composition_shares.values()) > 1 + 1e-9:
            raise PresetError("composition shares exceed 1")
        if not 0 < self.strong_rate <= 0.5:
            raise PresetError("strong_rate must be in (0, 0.5] so both labels occur")
        if self.size < MIN_SIZE:
            raise PresetError(f"size must be >= {MIN_SIZE}")

    @classmethod
    def from_dict(cls, d: dict) -> "CorpusPreset":
        return cls(
            name=d["name"],
            top10=tuple((p, float(s)) for p, s in d["top10"]),
            top10_total_share=float(d["top10_total_share"]),
            length_shares={int(k): float(v) for k, v in d.get("length_shares", {}).items()},
            composition_shares=dict(d.get("composition_shares", {})),
            size=int(d.get("size", 100_000)),
            seed=int(d.get("seed", 42)),
            strong_rate=float(d.get("strong_rate", 0.05)),
        )


def available_presets() -> list[str]:
    root = resources.files("pwlab") / "presets"
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def load_preset(name_or_path: str) -> CorpusPreset:
    """Load a packaged preset by name, or any preset JSON by path."""
    root = resources.files("pwlab") / "presets"
    packaged = root / f"{name_or_path}.json"
    if packaged.is_file():
        return CorpusPreset.from_dict(json.loads(packaged.read_text()))
    with open(name_or_path, "rb") as fh:
        return CorpusPreset.from_dict(json.load(fh))


def largest_remainder(targets: list[float], total: int) -> list[int]:
    """Integer apportionment of `total` proportional to non-negative targets.

    Floors each target, then hands remaining units to the largest fractional
    parts (ties to the earlier index). Deterministic.
    """
    if total < 0:
        raise ValueError("total must be >= 0")
    floors = [int(np.floor(t)) for t in targets]
    leftover = total - sum(floors)
    if leftover < 0:
        # targets overshoot the total; trim from the largest entries
        order = sorted(range(len(targets)), key=lambda i: (-floors[i], i))
        for i in order:
            take = min(floors[i], -leftover)
            floors[i] -= take
            leftover += take
            if leftover == 0:
                break
        return floors
    fracs = sorted(range(len(targets)), key=lambda i: (-(targets[i] - np.floor(targets[i])), i))
    for k in range(leftover):
        floors[fracs[k % len(targets)]] += 1
    return floors


def _class_count(sig: str) -> int:
    return len(sig)


def _batch_passwords(
    rng: np.random.Generator, length: int, sig: str, count: int, forbidden: set[str]
) -> list[str]:
    """`count` random strings of exactly this length and composition
    signature, never colliding with the forbidden literals."""
    union = "".join(CLASS_ALPHABETS[c] for c in sig)
    union_codes = np.frombuffer(union.encode("ascii"), dtype=np.uint8)
    class_codes = [
        np.frombuffer(CLASS_ALPHABETS[c].encode("ascii"), dtype=np.uint8) for c in sig
    ]
    out: list[str] = []
    remaining = count
    for _ in range(100):
        if remaining <= 0:
            break
        rows = union_codes[rng.integers(0, len(union_codes), size=(remaining, length))]
        # guarantee one character of every class at distinct positions
        positions = np.argsort(rng.random((remaining, length)), axis=1)[:, : len(sig)]
        for k, codes in enumerate(class_codes):
            rows[np.arange(remaining), positions[:, k]] = codes[
                rng.integers(0, len(codes), size=remaining)
            ]
        batch = rows.tobytes()
        made = [batch[i * length : (i + 1) * length].decode("ascii") for i in range(remaining)]
        kept = [s for s in made if s not in forbidden]
        out.extend(kept)
        remaining = count - len(out)
    if remaining > 0:
        raise PresetError(f"could not generate {count} strings of length {length} sig {sig}")
    return out


def generate(
    preset: CorpusPreset, size: int | None = None, seed: int | None = None
) -> list[CleanPassword]:
    """Emit exactly `size` password occurrences matching the preset.

    Deterministic for a fixed (preset, size, seed); defaults come from the
    preset itself.
    """
    n_total = preset.size if size is None else int(size)
    if n_total < MIN_SIZE:
        raise PresetError(f"size must be >= {MIN_SIZE}")
    rng = np.random.default_rng(preset.seed if seed is None else int(seed))

    # Top-10 literals at exact multiplicities.
    top_texts = [t for t, _ in preset.top10]
    top_counts = largest_remainder(
        [s * n_total for _, s in preset.top10], round(preset.top10_total_share * n_total)
    )
    n_top = sum(top_counts)
    forbidden = set(top_texts)

    # Length plan: declared lengths get exact quotas (net of top-10 usage),
    # everything else follows the default curve.
    declared_len = {length: round(share * n_total) for length, share in preset.length_shares.items()}
    resid_len = dict(declared_len)
    for text, cnt in zip(top_texts, top_counts):
        length = len(text)
        if length in resid_len:
            resid_len[length] -= cnt
            if resid_len[length] < 0:
                raise PresetError(
                    f"top10 mass at length {length} exceeds its declared share"
                )
    n_rest = n_total - n_top
    n_declared = sum(resid_len.values())
    n_undeclared = n_rest - n_declared
    if n_undeclared < 0:
        raise PresetError("declared length shares plus top10 exceed the corpus size")
    und_lengths = [length for length in range(4, 21) if length not in declared_len]
    und_weights = np.array([DEFAULT_LENGTH_WEIGHTS[length] for length in und_lengths])
    und_counts = largest_remainder(
        list(und_weights / und_weights.sum() * n_undeclared), n_undeclared
    )
    len_pool = dict(resid_len)
    len_pool.update({length: c for length, c in zip(und_lengths, und_counts)})

    # Strong slice: lengths >= 9 drawn proportionally from the pool.
    n_strong = round(preset.strong_rate * n_total)
    eligible = {length: c for length, c in len_pool.items() if length >= 9 and c > 0}
    n_eligible = sum(eligible.values())
    if n_eligible < n_strong:
        raise PresetError(
            f"only {n_eligible} occurrences have length >= 9; cannot host "
            f"{n_strong} strong passwords"
        )
    elig_lengths = sorted(eligible)
    strong_alloc = largest_remainder(
        [eligible[length] / n_eligible * n_strong for length in elig_lengths], n_strong
    )
    strong_len: dict[int, int] = {}
    overflow = 0
    for length, want in zip(elig_lengths, strong_alloc):
        take = min(want, eligible[length])
        strong_len[length] = take
        overflow += want - take
    for length in elig_lengths:  # redistribute any rounding overflow
        if overflow == 0:
            break
        spare = eligible[length] - strong_len[length]
        take = min(spare, overflow)
        strong_len[length] += take
        overflow -= take
    weak_len = {
        length: len_pool[length] - strong_len.get(length, 0) for length in len_pool
    }

    # Weak-filler composition plan: declared signatures get exact quotas
    # (net of top-10 usage), the rest follows the default weights.
    n_weak = n_rest - n_strong
    declared_comp = {
        sig: round(share * n_total) for sig, share in preset.composition_shares.items()
    }
    resid_comp = dict(declared_comp)
    for text, cnt in zip(top_texts, top_counts):
        sig = composition_signature(text)
        if sig in resid_comp:
            resid_comp[sig] -= cnt
            if resid_comp[sig] < 0:
                raise PresetError(f"top10 mass at composition {sig} exceeds its declared share")
    n_comp_undeclared = n_weak - sum(resid_comp.values())
    if n_comp_undeclared < 0:
        raise PresetError("declared composition shares exceed the weak corpus mass")
    und_comps = [c for c in DEFAULT_WEAK_COMP_WEIGHTS if c not in declared_comp]
    und_comp_weights = np.array([DEFAULT_WEAK_COMP_WEIGHTS[c] for c in und_comps])
    und_comp_counts = largest_remainder(
        list(und_comp_weights / und_comp_weights.sum() * n_comp_undeclared), n_comp_undeclared
    )
    weak_comp = dict(resid_comp)
    for sig, cnt in zip(und_comps, und_comp_counts):
        weak_comp[sig] = weak_comp.get(sig, 0) + cnt

    # Pair weak lengths with weak compositions. Signatures with 3+ classes
    # must stay below length 9 to remain weak.
    comp_names = sorted(weak_comp)
    lengths_arr = np.repeat(
        sorted(weak_len), [weak_len[length] for length in sorted(weak_len)]
    ).astype(np.int64)
    comps_arr = np.repeat(
        np.arange(len(comp_names)), [weak_comp[c] for c in comp_names]
    )
    rng.shuffle(lengths_arr)
    rng.shuffle(comps_arr)
    multi_ids = np.array(
        [i for i, c in enumerate(comp_names) if _class_count(c) >= 3], dtype=np.int64
    )
    multi_mask = np.isin(comps_arr, multi_ids)
    short_lengths = lengths_arr[lengths_arr < 9]
    n_multi = int(multi_mask.sum())
    if n_multi > len(short_lengths):
        # not enough short slots; downgrade the excess to DL so it stays weak
        dl_id = comp_names.index("DL") if "DL" in comp_names else None
        if dl_id is None:
            raise PresetError("cannot place multi-class weak filler below length 9")
        positions = np.flatnonzero(multi_mask)[len(short_lengths) :]
        comps_arr[positions] = dl_id
        multi_mask = np.isin(comps_arr, multi_ids)
        n_multi = int(multi_mask.sum())
    paired_lengths = np.empty_like(lengths_arr)
    paired_lengths[multi_mask] = short_lengths[:n_multi]
    rest = np.concatenate([short_lengths[n_multi:], lengths_arr[lengths_arr >= 9]])
    rng.shuffle(rest)
    paired_lengths[~multi_mask] = rest

    # Strong compositions.
    strong_sigs = sorted(STRONG_COMP_WEIGHTS)
    strong_w = np.array([STRONG_COMP_WEIGHTS[c] for c in strong_sigs])
    strong_lengths = np.repeat(
        sorted(strong_len), [strong_len[length] for length in sorted(strong_len)]
    ).astype(np.int64)
    strong_comp_pick = rng.choice(len(strong_sigs), size=n_strong, p=strong_w / strong_w.sum())

    # Generate every (length, signature) group in sorted order.
    counter: dict[str, int] = {}
    for text, cnt in zip(top_texts, top_counts):
        if cnt > 0:
            counter[text] = counter.get(text, 0) + cnt

    groups: dict[tuple[int, str], int] = {}
    for length, cid in zip(paired_lengths, comps_arr):
        key = (int(length), comp_names[cid])
        groups[key] = groups.get(key, 0) + 1
    for length, cid in zip(strong_lengths, strong_comp_pick):
        key = (int(length), strong_sigs[cid])
        groups[key] = groups.get(key, 0) + 1
    for (length, sig), cnt in sorted(groups.items()):
        for text in _batch_passwords(rng, length, sig, cnt, forbidden):
            counter[text] = counter.get(text, 0) + 1

    corpus = [
        CleanPassword(text, mult)
        for text, mult in sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
    ]
    assert sum(p.multiplicity for p in corpus) == n_total
    return corpus


def _decisive_cells() -> list[tuple[int, int, int, int]]:
    """Every feasible (digits, lowercase, uppercase, special) count vector
    over lengths 4..20: the lattice the strength rule is decided on."""
    cells = []
    for length in range(4, 21):
        for d in range(length + 1):
            for l in range(length + 1 - d):
                for u in range(length + 1 - d - l):
                    cells.append((d, l, u, length - d - l - u))
    return cells


def generate_diverse(n: int, seed: int) -> list[str]:
    """Passwords covering the strength rule's decision lattice.

    Rows are drawn over the 10,591 feasible length x class-count cells:
    when n allows, every cell is represented at least once (so all four
    quadrants of the rule boundary are populated at every granularity), and
    the remainder samples cells uniformly.

    Character identities are random per row (seeded), but the structure is
    canonical: classes appear in fixed block order and characters within a
    class are drawn distinct-first, so repetition, run length, and
    type-change counts are functions of the cell alone. Two seeds therefore
    yield disjoint strings whose feature vectors agree cell by cell, which
    makes exact tree-vs-rule comparisons well-posed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    cells = _decisive_cells()
    order = rng.permutation(len(cells))
    if n >= len(cells):
        picks = np.concatenate([order, rng.integers(0, len(cells), size=n - len(cells))])
    else:
        picks = order[:n]
    class_order = ("D", "L", "U", "S")
    out: list[str] = []
    for pick in picks:
        counts = cells[int(pick)]
        chars: list[str] = []
        for cls, count in zip(class_order, counts):
            if count == 0:
                continue
            alphabet = CLASS_ALPHABETS[cls]
            shuffled = [alphabet[j] for j in rng.permutation(len(alphabet))]
            # tiling one shuffle keeps equal characters non-adjacent
            chars.extend(shuffled[j % len(shuffled)] for j in range(count))
        out.append("".join(chars))
    return out
