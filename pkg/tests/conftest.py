import itertools

from falsepred import Sample, Structure, fit_hypothesis, project, training_errors


def mk(x_a: int, x_0: int, *redundant: int) -> Sample:
    return Sample(x_a=x_a, x_0=x_0, redundant=tuple(redundant))


def brute_force_min_errors(structure: Structure, data) -> int:
    """Reference error minimum: enumerate every binary table over the
    observed patterns of the structure (free rows cannot help on training
    data, so observed-row enumeration is exhaustive)."""
    patterns = sorted({project(s, structure) for s in data})
    best = len(data)
    for bits in itertools.product((0, 1), repeat=len(patterns)):
        table = dict(zip(patterns, bits))
        errs = sum(1 for s in data if table[project(s, structure)] != s.x_a)
        best = min(best, errs)
    return best


def fitted_errors(structure: Structure, data) -> int:
    return training_errors(fit_hypothesis(structure, data), data)
