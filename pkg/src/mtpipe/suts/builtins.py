"""Built-in subject corpus: 26 numeric/sequence functions over list-float,
each with 2-3 hand-seeded mutants (operator swaps, off-by-one bounds,
dropped abs, wrong constants).

Subjects flagged order-insensitive reduce in a canonical order (fsum, or a
sort before folding) so the flag is exact, not approximate: permuting the
input reproduces the same float bit-for-bit. Mutants intentionally do not
keep that discipline when the seeded bug is order-sensitivity. Every
mutant fails on exactly the inputs its parent fails on.

A few subjects (count_positive, abs_sum, clamped_sum, sum_of_squares) are
intentionally fragile under the built-in relations only on part of the
input space, which gives the constraint miner real subregions to find.
"""

from __future__ import annotations

from math import fsum, sqrt

from .registry import MutantDescriptor, Registry, SutDescriptor, SutDomainError

ORDER_INSENSITIVE = "order-insensitive"
MONOTONE = "monotone-in-elements"
SIGN_SYMMETRIC = "sign-symmetric"


def _need(x: list[float], n: int, reason: str) -> None:
    if len(x) < n:
        raise SutDomainError(reason)


# subjects ----------------------------------------------------------------

def sut_sum(x):
    return fsum(x)


def sut_product(x):
    p = 1.0
    for v in sorted(x):
        p *= v
    return p


def sut_min(x):
    _need(x, 1, "empty-input")
    return min(x)


def sut_max(x):
    _need(x, 1, "empty-input")
    return max(x)


def sut_mean(x):
    _need(x, 1, "empty-input")
    return fsum(x) / len(x)


def sut_median(x):
    _need(x, 1, "empty-input")
    s = sorted(x)
    mid = len(s) // 2
    if len(s) % 2 == 1:
        return s[mid]
    return (s[mid - 1] + s[mid]) / 2.0


def sut_count_positive(x):
    return float(sum(1 for v in x if v > 0))


def sut_count_negative(x):
    return float(sum(1 for v in x if v < 0))


def sut_abs_sum(x):
    return fsum(abs(v) for v in x)


def sut_sum_of_squares(x):
    return fsum(v * v for v in x)


def sut_euclidean_norm(x):
    return sqrt(fsum(v * v for v in x))


def sut_rms(x):
    _need(x, 1, "empty-input")
    return sqrt(fsum(v * v for v in x) / len(x))


def sut_range_span(x):
    _need(x, 1, "empty-input")
    return max(x) - min(x)


def sut_midrange(x):
    _need(x, 1, "empty-input")
    return (min(x) + max(x)) / 2.0


def sut_variance(x):
    _need(x, 1, "empty-input")
    m = fsum(x) / len(x)
    return fsum((v - m) ** 2 for v in x) / len(x)


def sut_std_dev(x):
    _need(x, 1, "empty-input")
    m = fsum(x) / len(x)
    return sqrt(fsum((v - m) ** 2 for v in x) / len(x))


def sut_sorted_check(x):
    return 1.0 if all(x[i] <= x[i + 1] for i in range(len(x) - 1)) else 0.0


def sut_first_element(x):
    _need(x, 1, "empty-input")
    return x[0]


def sut_last_element(x):
    _need(x, 1, "empty-input")
    return x[-1]


def sut_alternating_sum(x):
    acc = 0.0
    for i, v in enumerate(x):
        acc = acc + v if i % 2 == 0 else acc - v
    return acc


def sut_index_of_max(x):
    _need(x, 1, "empty-input")
    best = 0
    for i in range(1, len(x)):
        if x[i] > x[best]:
            best = i
    return float(best)


def sut_second_largest(x):
    _need(x, 2, "need-two-elements")
    return sorted(x)[-2]


def sut_trimmed_sum(x):
    _need(x, 3, "need-three-elements")
    return fsum(sorted(x)[1:-1])


def sut_clamped_sum(x):
    return fsum(min(10.0, max(-10.0, v)) for v in x)


def sut_positive_share(x):
    _need(x, 1, "empty-input")
    return sum(1 for v in x if v > 0) / len(x)


def sut_count_distinct(x):
    return float(len(set(x)))


# mutants -----------------------------------------------------------------

def mut_sum_plus_to_minus(x):
    if not x:
        return 0.0
    acc = x[0]
    for v in x[1:]:
        acc -= v
    return acc


def mut_sum_init_one(x):
    return fsum(x) + 1.0


def mut_sum_drop_last(x):
    return fsum(x[:-1])


def mut_product_times_to_plus(x):
    p = 1.0
    for v in sorted(x):
        p += v
    return p


def mut_product_init_zero(x):
    p = 0.0
    for v in sorted(x):
        p *= v
    return p


def mut_min_to_max(x):
    _need(x, 1, "empty-input")
    return max(x)


def mut_min_skip_first(x):
    _need(x, 1, "empty-input")
    return min(x[1:]) if len(x) > 1 else x[0]


def mut_max_to_min(x):
    _need(x, 1, "empty-input")
    return min(x)


def mut_max_skip_first(x):
    _need(x, 1, "empty-input")
    return max(x[1:]) if len(x) > 1 else x[0]


def mut_mean_div_n_plus_1(x):
    _need(x, 1, "empty-input")
    return fsum(x) / (len(x) + 1)


def mut_mean_forgot_div(x):
    _need(x, 1, "empty-input")
    return fsum(x)


def mut_median_upper_middle(x):
    _need(x, 1, "empty-input")
    return sorted(x)[len(x) // 2]


def mut_median_forgot_sort(x):
    _need(x, 1, "empty-input")
    mid = len(x) // 2
    if len(x) % 2 == 1:
        return x[mid]
    return (x[mid - 1] + x[mid]) / 2.0


def mut_count_positive_nonneg(x):
    return float(sum(1 for v in x if v >= 0))


def mut_count_positive_flipped(x):
    return float(sum(1 for v in x if v < 0))


def mut_count_negative_nonpos(x):
    return float(sum(1 for v in x if v <= 0))


def mut_abs_sum_dropped_abs(x):
    return fsum(x)


def mut_abs_sum_abs_of_sum(x):
    return abs(fsum(x))


def mut_sos_cubes(x):
    return fsum(v * v * v for v in x)


def mut_sos_dropped_square(x):
    return fsum(x)


def mut_sos_square_of_sum(x):
    s = fsum(x)
    return s * s


def mut_norm_missing_sqrt(x):
    return fsum(v * v for v in x)


def mut_norm_one_norm(x):
    return fsum(abs(v) for v in x)


def mut_rms_no_mean(x):
    _need(x, 1, "empty-input")
    return sqrt(fsum(v * v for v in x))


def mut_rms_div_n_plus_1(x):
    _need(x, 1, "empty-input")
    return sqrt(fsum(v * v for v in x) / (len(x) + 1))


def mut_range_minus_to_plus(x):
    _need(x, 1, "empty-input")
    return max(x) + min(x)


def mut_range_reversed(x):
    _need(x, 1, "empty-input")
    return min(x) - max(x)


def mut_midrange_minus(x):
    _need(x, 1, "empty-input")
    return (max(x) - min(x)) / 2.0


def mut_midrange_no_div(x):
    _need(x, 1, "empty-input")
    return min(x) + max(x)


def mut_variance_div_n_plus_1(x):
    _need(x, 1, "empty-input")
    m = fsum(x) / len(x)
    return fsum((v - m) ** 2 for v in x) / (len(x) + 1)


def mut_variance_missing_square(x):
    _need(x, 1, "empty-input")
    m = fsum(x) / len(x)
    return fsum((v - m) for v in x) / len(x)


def mut_std_no_sqrt(x):
    _need(x, 1, "empty-input")
    m = fsum(x) / len(x)
    return fsum((v - m) ** 2 for v in x) / len(x)


def mut_sorted_strict(x):
    return 1.0 if all(x[i] < x[i + 1] for i in range(len(x) - 1)) else 0.0


def mut_sorted_descending(x):
    return 1.0 if all(x[i] >= x[i + 1] for i in range(len(x) - 1)) else 0.0


def mut_first_last_instead(x):
    _need(x, 1, "empty-input")
    return x[-1]


def mut_first_negated(x):
    _need(x, 1, "empty-input")
    return -x[0]


def mut_last_first_instead(x):
    _need(x, 1, "empty-input")
    return x[0]


def mut_last_spurious_abs(x):
    _need(x, 1, "empty-input")
    return abs(x[-1])


def mut_alt_all_plus(x):
    return fsum(x)


def mut_alt_signs_flipped(x):
    acc = 0.0
    for i, v in enumerate(x):
        acc = acc - v if i % 2 == 0 else acc + v
    return acc


def mut_argmax_argmin(x):
    _need(x, 1, "empty-input")
    best = 0
    for i in range(1, len(x)):
        if x[i] < x[best]:
            best = i
    return float(best)


def mut_argmax_last_tie(x):
    _need(x, 1, "empty-input")
    best = 0
    for i in range(1, len(x)):
        if x[i] >= x[best]:
            best = i
    return float(best)


def mut_second_largest_smallest(x):
    _need(x, 2, "need-two-elements")
    return sorted(x)[1]


def mut_second_largest_largest(x):
    _need(x, 2, "need-two-elements")
    return sorted(x)[-1]


def mut_trimmed_keep_max(x):
    _need(x, 3, "need-three-elements")
    return fsum(sorted(x)[1:])


def mut_trimmed_keep_min(x):
    _need(x, 3, "need-three-elements")
    return fsum(sorted(x)[:-1])


def mut_clamp_low_only(x):
    return fsum(max(-10.0, v) for v in x)


def mut_clamp_wrong_bound(x):
    return fsum(min(5.0, max(-5.0, v)) for v in x)


def mut_share_nonneg(x):
    _need(x, 1, "empty-input")
    return sum(1 for v in x if v >= 0) / len(x)


def mut_share_inverted(x):
    _need(x, 1, "empty-input")
    return sum(1 for v in x if v <= 0) / len(x)


def mut_distinct_count_all(x):
    return float(len(x))


def mut_distinct_plus_one(x):
    return float(len(set(x)) + 1)


# corpus table: (id, impl, flags, [(mutant slug, description, impl), ...])
_CORPUS = (
    ("sum", sut_sum, {ORDER_INSENSITIVE, MONOTONE}, (
        ("plus_to_minus", "+ replaced by - in fold", mut_sum_plus_to_minus),
        ("init_one", "accumulator initialized to 1 instead of 0", mut_sum_init_one),
        ("drop_last", "loop bound excludes the last element", mut_sum_drop_last),
    )),
    ("product", sut_product, {ORDER_INSENSITIVE}, (
        ("times_to_plus", "* replaced by + in fold", mut_product_times_to_plus),
        ("init_zero", "accumulator initialized to 0 instead of 1", mut_product_init_zero),
    )),
    ("min", sut_min, {ORDER_INSENSITIVE, MONOTONE}, (
        ("to_max", "comparison flipped: returns maximum", mut_min_to_max),
        ("skip_first", "scan starts at index 1 when length > 1", mut_min_skip_first),
    )),
    ("max", sut_max, {ORDER_INSENSITIVE, MONOTONE}, (
        ("to_min", "comparison flipped: returns minimum", mut_max_to_min),
        ("skip_first", "scan starts at index 1 when length > 1", mut_max_skip_first),
    )),
    ("mean", sut_mean, {ORDER_INSENSITIVE, MONOTONE}, (
        ("div_n_plus_1", "divisor n replaced by n+1", mut_mean_div_n_plus_1),
        ("forgot_div", "division by n dropped", mut_mean_forgot_div),
    )),
    ("median", sut_median, {ORDER_INSENSITIVE, MONOTONE}, (
        ("upper_middle", "even length takes upper middle, no averaging", mut_median_upper_middle),
        ("forgot_sort", "middle of the unsorted list", mut_median_forgot_sort),
    )),
    ("count_positive", sut_count_positive, {ORDER_INSENSITIVE, MONOTONE}, (
        ("nonneg", "> replaced by >=", mut_count_positive_nonneg),
        ("flipped", "> replaced by <", mut_count_positive_flipped),
    )),
    ("count_negative", sut_count_negative, {ORDER_INSENSITIVE}, (
        ("nonpos", "< replaced by <=", mut_count_negative_nonpos),
    )),
    ("abs_sum", sut_abs_sum, {ORDER_INSENSITIVE, SIGN_SYMMETRIC}, (
        ("dropped_abs", "abs() dropped from the summand", mut_abs_sum_dropped_abs),
        ("abs_of_sum", "abs applied after the sum instead of per element", mut_abs_sum_abs_of_sum),
    )),
    ("sum_of_squares", sut_sum_of_squares, {ORDER_INSENSITIVE, SIGN_SYMMETRIC}, (
        ("cubes", "square replaced by cube", mut_sos_cubes),
        ("dropped_square", "square dropped from the summand", mut_sos_dropped_square),
        ("square_of_sum", "sum squared instead of squares summed", mut_sos_square_of_sum),
    )),
    ("euclidean_norm", sut_euclidean_norm, {ORDER_INSENSITIVE, SIGN_SYMMETRIC}, (
        ("missing_sqrt", "sqrt dropped", mut_norm_missing_sqrt),
        ("one_norm", "squares replaced by absolute values", mut_norm_one_norm),
    )),
    ("rms", sut_rms, {ORDER_INSENSITIVE, SIGN_SYMMETRIC}, (
        ("no_mean", "division by n dropped before sqrt", mut_rms_no_mean),
        ("div_n_plus_1", "divisor n replaced by n+1", mut_rms_div_n_plus_1),
    )),
    ("range_span", sut_range_span, {ORDER_INSENSITIVE, SIGN_SYMMETRIC}, (
        ("minus_to_plus", "- replaced by +", mut_range_minus_to_plus),
        ("reversed", "operands swapped: min - max", mut_range_reversed),
    )),
    ("midrange", sut_midrange, {ORDER_INSENSITIVE}, (
        ("minus", "+ replaced by -", mut_midrange_minus),
        ("no_div", "division by 2 dropped", mut_midrange_no_div),
    )),
    ("variance", sut_variance, {ORDER_INSENSITIVE, SIGN_SYMMETRIC}, (
        ("div_n_plus_1", "divisor n replaced by n+1", mut_variance_div_n_plus_1),
        ("missing_square", "residual square dropped", mut_variance_missing_square),
    )),
    ("std_dev", sut_std_dev, {ORDER_INSENSITIVE, SIGN_SYMMETRIC}, (
        ("no_sqrt", "sqrt dropped: returns variance", mut_std_no_sqrt),
    )),
    ("sorted_check", sut_sorted_check, set(), (
        ("strict", "<= replaced by <", mut_sorted_strict),
        ("descending", "<= replaced by >=", mut_sorted_descending),
    )),
    ("first_element", sut_first_element, {MONOTONE}, (
        ("last_instead", "index 0 replaced by -1", mut_first_last_instead),
        ("negated", "sign flipped", mut_first_negated),
    )),
    ("last_element", sut_last_element, {MONOTONE}, (
        ("first_instead", "index -1 replaced by 0", mut_last_first_instead),
        ("spurious_abs", "abs applied to the result", mut_last_spurious_abs),
    )),
    ("alternating_sum", sut_alternating_sum, set(), (
        ("all_plus", "alternating - replaced by +", mut_alt_all_plus),
        ("signs_flipped", "even/odd sign pattern inverted", mut_alt_signs_flipped),
    )),
    ("index_of_max", sut_index_of_max, set(), (
        ("argmin", "comparison flipped: index of minimum", mut_argmax_argmin),
        ("last_tie", "> replaced by >=: ties resolve to last", mut_argmax_last_tie),
    )),
    ("second_largest", sut_second_largest, {ORDER_INSENSITIVE}, (
        ("smallest", "sorted index -2 replaced by 1", mut_second_largest_smallest),
        ("largest", "sorted index -2 replaced by -1", mut_second_largest_largest),
    )),
    ("trimmed_sum", sut_trimmed_sum, {ORDER_INSENSITIVE}, (
        ("keep_max", "upper trim bound off by one", mut_trimmed_keep_max),
        ("keep_min", "lower trim bound off by one", mut_trimmed_keep_min),
    )),
    ("clamped_sum", sut_clamped_sum, {ORDER_INSENSITIVE, MONOTONE}, (
        ("low_only", "upper clamp dropped", mut_clamp_low_only),
        ("wrong_bound", "clamp bounds 10 replaced by 5", mut_clamp_wrong_bound),
    )),
    ("positive_share", sut_positive_share, {ORDER_INSENSITIVE}, (
        ("nonneg", "> replaced by >=", mut_share_nonneg),
        ("inverted", "> replaced by <=", mut_share_inverted),
    )),
    ("count_distinct", sut_count_distinct, {ORDER_INSENSITIVE, SIGN_SYMMETRIC}, (
        ("count_all", "deduplication dropped", mut_distinct_count_all),
        ("plus_one", "off-by-one in the count", mut_distinct_plus_one),
    )),
)


def default_registry() -> Registry:
    """The built-in corpus: 26 list-float subjects with seeded mutants."""
    descriptors = []
    for sut_id, impl, flags, mutants in _CORPUS:
        mutant_descs = tuple(
            MutantDescriptor(
                id=f"{sut_id}_mut_{slug}",
                parent_sut=sut_id,
                description=desc,
                impl=mimpl,
            )
            for slug, desc, mimpl in mutants
        )
        descriptors.append(SutDescriptor(
            id=sut_id,
            input_kind="list-float",
            output_kind="float",
            impl=impl,
            oracle_flags=frozenset(flags),
            mutants=mutant_descs,
        ))
    return Registry(suts=tuple(descriptors))
