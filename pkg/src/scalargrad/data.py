"""Seeded spiral data and its CSV persistence."""
import math
from dataclasses import dataclass

_MASK = (1 << 64) - 1

# spiral constants; the sweep is a keyword only so scripts can probe it
SWEEP = 3.0 * math.pi
R_MIN = 0.1
NOISE = 0.15


class Rng:
    """SplitMix64. Same seed, same stream, on any platform."""

    GAMMA = 0x9E3779B97F4A7C15
    MIX1 = 0xBF58476D1CE4E5B9
    MIX2 = 0x94D049BB133111EB

    def __init__(self, seed=0):
        self.state = seed & _MASK

    def next_u64(self):
        self.state = (self.state + self.GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * self.MIX1) & _MASK
        z = ((z ^ (z >> 27)) * self.MIX2) & _MASK
        return z ^ (z >> 31)

    def next_uniform(self):
        """Float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, lo, hi):
        return lo + (hi - lo) * self.next_uniform()


@dataclass(frozen=True)
class Sample:
    x: float
    y: float
    label: int


@dataclass
class Dataset:
    samples: list

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, i):
        return self.samples[i]


def generate_spiral(n_per_class, rng, sweep=SWEEP):
    """Two interleaved spiral arms, ``n_per_class`` points each, labels
    alternating +1, -1, +1, ...

    Each point draws its position along the arm and then its angular jitter,
    in that order, from ``rng``.
    """
    if n_per_class < 1:
        raise ValueError(f"n_per_class must be >= 1, got {n_per_class}")
    samples = []
    for _ in range(n_per_class):
        for label in (1, -1):
            u = rng.next_uniform()
            eps = rng.uniform(-NOISE, NOISE)
            r = R_MIN + (1.0 - R_MIN) * u
            theta = sweep * u + (math.pi if label == -1 else 0.0) + eps
            samples.append(Sample(r * math.sin(theta), r * math.cos(theta), label))
    return Dataset(samples)


class DataFormatError(ValueError):
    pass


def save_csv(dataset, path):
    with open(path, "w", newline="\n") as f:
        for s in dataset:
            f.write(f"{s.x!r},{s.y!r},{s.label}\n")


def parse_sample(line, lineno=0):
    parts = line.strip().split(",")
    if len(parts) != 3:
        raise DataFormatError(f"line {lineno}: expected 'x,y,label', got {line.strip()!r}")
    try:
        x, y = float(parts[0]), float(parts[1])
        label = int(parts[2])
    except ValueError:
        raise DataFormatError(f"line {lineno}: cannot parse {line.strip()!r}") from None
    if label not in (1, -1):
        raise DataFormatError(f"line {lineno}: label must be -1 or 1, got {label}")
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DataFormatError(f"line {lineno}: non-finite coordinate")
    return Sample(x, y, label)


def load_csv(path):
    try:
        with open(path) as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise DataFormatError(f"cannot read {path}: {e}") from e
    samples = [parse_sample(line, i) for i, line in enumerate(lines, 1) if line.strip()]
    return Dataset(samples)
