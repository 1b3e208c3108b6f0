"""Seeded random test-data generation per subject signature.

Generation is a pure function of (signature, profile, seed): per-datum
streams are derived with mix64 so datasets are reproducible bit-for-bit
and strata can be generated independently. Values land on a 2-decimal
grid by default, which keeps mined thresholds readable; full-precision
mode is a profile flag.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import FormatError, InvalidProfile, IoError
from .mrlang.ast import INPUT_KINDS
from .rng import SplitMix64, mix64

SIGN_MIXES = ("any", "nonneg", "nonpos", "mixed-forced")
GRID_DECIMALS = 2


@dataclass(frozen=True)
class GenProfile:
    n: int
    len_range: tuple[int, int] = (1, 12)
    value_range: tuple[float, float] = (-100.0, 100.0)
    sign_mix: str = "any"
    duplicates_allowed: bool = True
    full_precision: bool = False

    def validate(self) -> None:
        if self.n < 1:
            raise InvalidProfile(f"n must be >= 1, got {self.n}")
        if self.len_range[0] < 0 or self.len_range[0] > self.len_range[1]:
            raise InvalidProfile(f"bad len_range {self.len_range}")
        lo, hi = self.value_range
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise InvalidProfile(f"bad value_range {self.value_range}")
        if self.sign_mix not in SIGN_MIXES:
            raise InvalidProfile(f"unknown sign_mix {self.sign_mix!r}")


@dataclass(frozen=True)
class TestDatum:
    datum_id: int
    values: tuple  # one argument: a scalar or a list
    stratum: str = "any"
    seed_path: tuple[int, int] = field(default=(0, 0), compare=False)

    @property
    def argument(self):
        return self.values[0]


def _effective_range(profile: GenProfile) -> tuple[float, float]:
    lo, hi = profile.value_range
    if profile.sign_mix == "nonneg":
        lo = max(lo, 0.0)
    elif profile.sign_mix == "nonpos":
        hi = min(hi, 0.0)
    if not lo < hi:
        raise InvalidProfile(
            f"value_range {profile.value_range} incompatible with sign_mix {profile.sign_mix!r}")
    return lo, hi


def _draw_value(rng: SplitMix64, lo: float, hi: float, is_int: bool, full_precision: bool) -> float:
    if is_int:
        return float(rng.next_int(math.ceil(lo), math.floor(hi)))
    if full_precision:
        return lo + rng.next_float() * (hi - lo)
    scale = 10 ** GRID_DECIMALS
    return rng.next_int(math.ceil(lo * scale), math.floor(hi * scale)) / scale


def _draw_signed(rng: SplitMix64, lo: float, hi: float, sign: int, is_int: bool,
                 full_precision: bool) -> float:
    """Draw a strictly positive (sign=+1) or strictly negative value."""
    step = 1.0 if is_int else (1.0 if full_precision else 10.0 ** -GRID_DECIMALS)
    if sign > 0:
        slo, shi = max(lo, step), hi
    else:
        slo, shi = lo, min(hi, -step)
    if slo > shi:
        raise InvalidProfile(
            f"sign_mix 'mixed-forced' needs value_range spanning both signs, got ({lo}, {hi})")
    if full_precision and not is_int:
        v = slo + rng.next_float() * (shi - slo)
        return v if v != 0.0 else slo
    return _draw_value(rng, slo, shi, is_int, full_precision)


def _gen_list(rng: SplitMix64, profile: GenProfile, is_int: bool) -> list[float]:
    lo, hi = _effective_range(profile)
    length = rng.next_int(profile.len_range[0], profile.len_range[1])
    out: list[float] = []
    for _ in range(length):
        v = _draw_value(rng, lo, hi, is_int, profile.full_precision)
        if not profile.duplicates_allowed:
            for _ in range(64):
                if v not in out:
                    break
                v = _draw_value(rng, lo, hi, is_int, profile.full_precision)
        out.append(v)
    if profile.sign_mix == "mixed-forced" and length >= 2:
        if not any(v > 0 for v in out):
            ix = rng.next_int(0, length - 1)
            out[ix] = _draw_signed(rng, lo, hi, +1, is_int, profile.full_precision)
        if not any(v < 0 for v in out):
            keep = next(i for i, v in enumerate(out) if v > 0)
            choices = [i for i in range(length) if i != keep]
            ix = choices[rng.next_int(0, len(choices) - 1)]
            out[ix] = _draw_signed(rng, lo, hi, -1, is_int, profile.full_precision)
    return out


def generate_dataset(signature: str, profile: GenProfile, seed: int,
                     first_id: int = 0, stratum: str | None = None) -> list[TestDatum]:
    """Generate exactly profile.n data for the given input kind.

    Running twice with equal arguments yields identical data. For
    mixed-forced profiles every list of length >= 2 contains at least one
    positive and one negative element.
    """
    if signature not in INPUT_KINDS:
        raise InvalidProfile(f"unknown input kind {signature!r}")
    profile.validate()
    is_int = signature.endswith("int")
    is_list = signature.startswith("list")
    label = stratum if stratum is not None else profile.sign_mix
    data: list[TestDatum] = []
    for i in range(profile.n):
        rng = SplitMix64(mix64(seed, i))
        if is_list:
            arg = _gen_list(rng, profile, is_int)
            values = (arg,)
        else:
            lo, hi = _effective_range(profile)
            values = (_draw_value(rng, lo, hi, is_int, profile.full_precision),)
        data.append(TestDatum(
            datum_id=first_id + i,
            values=values,
            stratum=label,
            seed_path=(seed, i),
        ))
    return data


def stratify(signature: str, profiles: list[GenProfile], seed: int) -> list[TestDatum]:
    """Concatenate per-profile datasets with independently derived seeds.

    Datum ids are globally unique and consecutive from 0.
    """
    if not profiles:
        raise InvalidProfile("at least one profile required")
    for p in profiles:
        p.validate()
    data: list[TestDatum] = []
    for stratum_ix, profile in enumerate(profiles):
        child_seed = mix64(seed, 1000 + stratum_ix)
        data.extend(generate_dataset(signature, profile, child_seed, first_id=len(data)))
    return data


def default_profiles(n: int = 200, full_precision: bool = False) -> list[GenProfile]:
    """Four strata (any, nonneg, nonpos, mixed-forced) splitting n evenly.

    The strata exist so the miner sees sign-separable evidence even at
    modest n; they are not part of any relation's contract.
    """
    if n < 1:
        raise InvalidProfile(f"n must be >= 1, got {n}")
    base = GenProfile(n=1, full_precision=full_precision)
    counts = [n // 4] * 4
    for i in range(n % 4):
        counts[i] += 1
    mixes = ["any", "nonneg", "nonpos", "mixed-forced"]
    return [replace(base, n=c, sign_mix=m) for c, m in zip(counts, mixes) if c > 0]


# dataset file io ----------------------------------------------------------

def dataset_to_lines(data: list[TestDatum]) -> list[str]:
    return [
        json.dumps({"datum_id": d.datum_id, "values": list(d.values), "stratum": d.stratum},
                   separators=(",", ":"))
        for d in data
    ]


def save_dataset(data: list[TestDatum], path: str | Path) -> None:
    try:
        Path(path).write_text("".join(line + "\n" for line in dataset_to_lines(data)),
                              encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write dataset {path}: {exc}") from exc


def load_dataset(path: str | Path) -> list[TestDatum]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read dataset {path}: {exc}") from exc
    data: list[TestDatum] = []
    for ln, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
            values = raw["values"]
            datum = TestDatum(
                datum_id=int(raw["datum_id"]),
                values=tuple(list(v) if isinstance(v, list) else v for v in values),
                stratum=str(raw.get("stratum", "any")),
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"{path}:{ln}: bad dataset line: {exc}") from exc
        data.append(datum)
    return data
