"""Kostka-Foulkes polynomials by brute force over semistandard tableaux.

This is deliberately independent of the crystal code: it knows nothing about
paths, energies or Cartan data, and serves as an oracle for them.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from .laurent import LaurentPolynomial


def _partition(p: Sequence[int]) -> tuple[int, ...]:
    p = tuple(int(x) for x in p if x)
    if any(x < 0 for x in p) or any(a < b for a, b in zip(p, p[1:])):
        raise ValueError(f"{p} is not a partition")
    return p


def tableaux(shape: Sequence[int], content: Sequence[int]) -> Iterator[list[list[int]]]:
    """Semistandard tableaux of ``shape`` with ``content[k]`` entries equal to k+1."""
    shape = _partition(shape)
    content = tuple(content)
    if sum(shape) != sum(content):
        return
    cells = [(r, c) for r in range(len(shape)) for c in range(shape[r])]
    rows = [[0] * n for n in shape]
    left = list(content)

    def fill(k: int):
        if k == len(cells):
            yield [row[:] for row in rows]
            return
        r, c = cells[k]
        lo = 1
        if c > 0:
            lo = max(lo, rows[r][c - 1])
        if r > 0:
            lo = max(lo, rows[r - 1][c] + 1)
        for v in range(lo, len(left) + 1):
            if left[v - 1]:
                left[v - 1] -= 1
                rows[r][c] = v
                yield from fill(k + 1)
                left[v - 1] += 1
        rows[r][c] = 0

    yield from fill(0)


def reading_word(tab: list[list[int]]) -> list[int]:
    """Rows from bottom to top, each left to right."""
    return [x for row in reversed(tab) for x in row]


def charge(word: Sequence[int]) -> int:
    """Lascoux-Schutzenberger charge of a word whose content is a partition."""
    letters = list(word)
    total = 0
    while letters:
        n = len(letters)
        top = max(letters)
        picked = []
        # scan leftwards cyclically from the right end
        cur = n
        index = 0
        for r in range(1, top + 1):
            found = None
            for step in range(1, n + 1):
                p = (cur - step) % n
                if letters[p] == r and p not in picked:
                    found = p
                    wrapped = cur - step < 0
                    break
            if found is None:
                raise ValueError(f"content of {word} is not a partition")
            if r > 1 and wrapped:
                index += 1
            total += index
            picked.append(found)
            cur = found
        keep = sorted(set(range(n)) - set(picked))
        letters = [letters[p] for p in keep]
    return total


def charge_oracle(shape: Sequence[int], content: Sequence[int]) -> LaurentPolynomial:
    """K_{shape,content}(q) = sum of q^charge(T) over semistandard T."""
    shape = _partition(shape)
    content = _partition(content)
    if sum(shape) != sum(content):
        raise ValueError(f"size mismatch: |{shape}| != |{content}|")
    return LaurentPolynomial.from_exponents(charge(reading_word(t)) for t in tableaux(shape, content))
