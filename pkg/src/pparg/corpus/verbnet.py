"""VerbNet class-file parsing into a verb -> licensed-preposition inventory.

A verb's preposition set is the union of the PREP slots in every frame of its
class, walking subclasses: members of a subclass also inherit the frames of
all ancestor classes, but parent-class members do not see subclass frames.
PREP slots name prepositions either literally (space-separated alternatives
in the value attribute) or through selectional-restriction features such as
spatial, which are expanded through a feature -> preposition-set map.
Underscore tokens (multi-word prepositions) are dropped. Verbs whose entries
appear in more than one top-level class are excluded by default.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

__all__ = [
    "FeaturalPrepMap",
    "FrameInventory",
    "UnmappedFeatureError",
    "VerbnetParseError",
    "default_featural_map",
    "load_featural_map",
    "load_verbnet_dir",
    "parse_verbnet",
]


class VerbnetParseError(ValueError):
    """Malformed class XML, reported with document id and byte offset."""


class UnmappedFeatureError(KeyError):
    """A featural PREP slot names a feature absent from the map."""


@dataclass(frozen=True)
class FeaturalPrepMap:
    mapping: dict[str, frozenset[str]]

    def __post_init__(self) -> None:
        for feature, preps in self.mapping.items():
            if feature != feature.lower() or feature.startswith("+"):
                raise ValueError(f"feature name {feature!r} must be lowercase, no '+'")
            for p in preps:
                _check_prep(p)

    def expand(self, feature: str) -> frozenset[str]:
        key = feature.lower().lstrip("+")
        if key not in self.mapping:
            raise UnmappedFeatureError(key)
        return self.mapping[key]


@dataclass(frozen=True)
class FrameInventory:
    entries: dict[str, frozenset[str]]
    prep_universe: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        universe = set(self.prep_universe)
        for verb, preps in self.entries.items():
            _check_verb(verb)
            stray = preps - universe
            if stray:
                raise ValueError(f"verb {verb!r} uses preps outside the universe: {sorted(stray)}")

    @classmethod
    def from_entries(cls, entries: dict[str, frozenset[str]]) -> "FrameInventory":
        universe = tuple(sorted(set().union(*entries.values()) if entries else set()))
        return cls(entries=dict(entries), prep_universe=universe)

    def licensed(self, verb: str) -> frozenset[str]:
        return self.entries.get(verb, frozenset())


def _check_verb(text: str) -> None:
    if not text or text != text.lower() or any(c.isspace() for c in text):
        raise ValueError(f"bad verb lemma {text!r}: need non-empty lowercase, no whitespace")


def _check_prep(text: str) -> None:
    if not text or text != text.lower():
        raise ValueError(f"bad preposition {text!r}: need non-empty lowercase")
    if any(c.isspace() for c in text) or "_" in text:
        raise ValueError(f"bad preposition {text!r}: multi-word forms are excluded")


def _byte_offset(data: bytes, line: int, column: int) -> int:
    lines = data.split(b"\n")
    return sum(len(l) + 1 for l in lines[: line - 1]) + column


def _frame_preps(class_elem: ET.Element, featural_map: FeaturalPrepMap) -> frozenset[str]:
    """Prepositions licensed by this class element's own FRAMES block."""
    preps: set[str] = set()
    frames = class_elem.find("FRAMES")
    if frames is None:
        return frozenset()
    for prep_elem in frames.iter("PREP"):
        value = prep_elem.get("value", "")
        for token in value.split():
            token = token.lstrip("?").lower()
            if not token or "_" in token:
                continue  # multi-word prepositions are out of scope
            preps.add(token)
        for selrestr in prep_elem.iter("SELRESTR"):
            if selrestr.get("Value") != "+":
                continue
            feature = selrestr.get("type", "")
            preps.update(featural_map.expand(feature))
    return frozenset(preps)


def _walk_class(
    class_elem: ET.Element,
    inherited: frozenset[str],
    featural_map: FeaturalPrepMap,
    sink: dict[str, set[str]],
) -> None:
    effective = inherited | _frame_preps(class_elem, featural_map)
    members = class_elem.find("MEMBERS")
    if members is not None:
        for member in members.iter("MEMBER"):
            name = member.get("name", "").strip().lower()
            if not name:
                continue
            sink.setdefault(name, set()).update(effective)
    subclasses = class_elem.find("SUBCLASSES")
    if subclasses is not None:
        for sub in subclasses.findall("VNSUBCLASS"):
            _walk_class(sub, effective, featural_map, sink)


def parse_verbnet(
    xml_documents: Iterable[tuple[str, bytes]],
    featural_map: FeaturalPrepMap,
    include_multiclass: bool = False,
) -> FrameInventory:
    """Build the inventory from (document-id, bytes) pairs of class files.

    Verbs that are members of more than one top-level class are dropped
    unless ``include_multiclass`` is set, in which case their frames union.
    """
    per_verb: dict[str, set[str]] = {}
    top_classes: dict[str, set[str]] = {}
    for doc_id, data in xml_documents:
        try:
            root = ET.fromstring(data)
        except ET.ParseError as exc:
            line, col = exc.position
            offset = _byte_offset(data, line, col)
            raise VerbnetParseError(f"{doc_id}: {exc.msg} at byte {offset}") from exc
        if root.tag != "VNCLASS":
            raise VerbnetParseError(f"{doc_id}: root element is {root.tag!r}, expected VNCLASS")
        class_id = root.get("ID", doc_id)
        doc_verbs: dict[str, set[str]] = {}
        _walk_class(root, frozenset(), featural_map, doc_verbs)
        for verb, preps in doc_verbs.items():
            per_verb.setdefault(verb, set()).update(preps)
            top_classes.setdefault(verb, set()).add(class_id)

    entries: dict[str, frozenset[str]] = {}
    for verb, preps in per_verb.items():
        if len(top_classes[verb]) > 1 and not include_multiclass:
            continue
        entries[verb] = frozenset(preps)
    return FrameInventory.from_entries(entries)


def load_verbnet_dir(
    path: str | Path,
    featural_map: FeaturalPrepMap,
    include_multiclass: bool = False,
) -> FrameInventory:
    """Parse every .xml file under ``path`` (sorted by name)."""
    path = Path(path)
    if not path.is_dir():
        raise FileNotFoundError(f"not a directory: {path}")
    docs = [(p.name, p.read_bytes()) for p in sorted(path.glob("*.xml"))]
    return parse_verbnet(docs, featural_map, include_multiclass=include_multiclass)


def load_featural_map(path: str | Path) -> FeaturalPrepMap:
    """Read a ``feature<TAB>prep1,prep2,...`` map file. '#' lines are comments."""
    mapping: dict[str, frozenset[str]] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" not in line:
            raise ValueError(f"line {lineno}: expected feature<TAB>preps, got {line!r}")
        feature, _, preps = line.partition("\t")
        feature = feature.strip().lower().lstrip("+")
        items = frozenset(p.strip().lower() for p in preps.split(",") if p.strip())
        if not items:
            raise ValueError(f"line {lineno}: feature {feature!r} maps to nothing")
        if feature in mapping:
            raise ValueError(f"line {lineno}: duplicate feature {feature!r}")
        mapping[feature] = items
    return FeaturalPrepMap(mapping)


def default_featural_map() -> FeaturalPrepMap:
    """The map shipped with the package (approximate; the original is unpublished)."""
    source = resources.files("pparg").joinpath("data/featural_preps.tsv")
    with resources.as_file(source) as path:
        return load_featural_map(path)
