"""Generators of a diagram: one crossing on each curve of one family, bijective onto another."""
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from ..errors import InputError
from .diagram import ALPHA, BETA, CombinatorialDiagram, check_generator, generator_families


@dataclass(frozen=True)
class GeneratorMatching:
    components: Tuple[Tuple[str, str], ...]

    @classmethod
    def of(cls, pairs) -> 'GeneratorMatching':
        return cls(tuple(sorted((str(c), str(x)) for c, x in pairs)))

    @property
    def crossings(self) -> Tuple[str, ...]:
        return tuple(x for _, x in self.components)

    def on(self, curve: str) -> str:
        for c, x in self.components:
            if c == curve:
                return x
        raise KeyError(curve)

    def format(self) -> str:
        return ' '.join('({},{})'.format(c, x) for c, x in self.components)

    def __str__(self):
        return self.format()


def named_generator(d: CombinatorialDiagram, name: str,
                    families: Optional[Tuple[str, str]] = None) -> GeneratorMatching:
    if name not in d.generators:
        raise InputError('{} declares no generator {}'.format(d.name or 'diagram', name))
    comps = d.generators[name]
    check_generator(d, comps, families or generator_families(d, comps))
    return GeneratorMatching.of(comps)


def enumerate_generators(d: CombinatorialDiagram, families: Tuple[str, str] = (ALPHA, BETA),
                         allowed: Optional[Callable[[str], bool]] = None) -> Iterator[GeneratorMatching]:
    """All matchings, optionally restricted to crossings passing `allowed`, in a fixed order."""
    first = [c.name for c in d.family(families[0])]
    second = {c.name for c in d.family(families[1])}
    options: List[List[Tuple[str, str]]] = []
    for curve in first:
        row = []
        for x in d.curve[curve].crossings:
            cr = d.crossing[x]
            other = cr.second if cr.first == curve else cr.first
            if other in second and (allowed is None or allowed(x)):
                row.append((other, x))
        options.append(row)

    def extend(i: int, used: set, chosen: List[Tuple[str, str]]):
        if i == len(first):
            yield GeneratorMatching.of(chosen)
            return
        for other, x in options[i]:
            if other in used:
                continue
            used.add(other)
            chosen.append((first[i], x))
            yield from extend(i + 1, used, chosen)
            chosen.pop()
            used.discard(other)

    if len(first) != len(second):
        return iter(())
    return extend(0, set(), [])


def tagged_generators(d: CombinatorialDiagram, tag: str,
                      families: Sequence[str] = (ALPHA, BETA)) -> List[GeneratorMatching]:
    members = d.tags.get(tag, frozenset())
    return list(enumerate_generators(d, tuple(families), lambda x: x in members))
