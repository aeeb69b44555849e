"""Pattern-catalog extraction of DDI facts from interaction sentences.

Interaction descriptions are highly repetitive, so matching is done with
literal templates in which the two drug mentions are replaced by the
placeholders DrugX and DrugY.  Each catalog row fixes which placeholder is
the precipitant, the effect phrase, and the impact.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field

from .model import DrugId, PkDdi, ValidationError, normalize_effect, IMPACTS


class CatalogError(ValueError):
    """Malformed pattern catalog or lexicon file."""


@dataclass(frozen=True)
class Pattern:
    pattern_id: int
    template: str
    precipitant_slot: str  # "DrugX" | "DrugY"
    effect_phrase: str
    impact: str
    symmetric: bool = False

    def __post_init__(self):
        for slot in ("DrugX", "DrugY"):
            if self.template.count(slot) != 1:
                raise CatalogError(
                    f"pattern {self.pattern_id}: template must contain {slot} exactly once"
                )
        if self.precipitant_slot not in ("DrugX", "DrugY"):
            raise CatalogError(
                f"pattern {self.pattern_id}: bad precipitant slot {self.precipitant_slot!r}"
            )
        if self.impact not in IMPACTS:
            raise CatalogError(f"pattern {self.pattern_id}: bad impact {self.impact!r}")

    def regex(self) -> re.Pattern:
        parts = re.split(r"(DrugX|DrugY)", self.template)
        out = []
        for part in parts:
            if part in ("DrugX", "DrugY"):
                # drug mentions never span a sentence boundary
                out.append(f"(?P<{part}>[^.]+?)")
            else:
                out.append(re.escape(part))
        return re.compile("".join(out), re.IGNORECASE)


class Lexicon:
    """Case-insensitive surface-form -> DrugId table with longest-match lookup."""

    def __init__(self, entries: dict[str, DrugId]):
        self._table: dict[str, DrugId] = {}
        for surface, drug in entries.items():
            key = surface.strip().lower()
            if not key:
                raise CatalogError("empty lexicon surface form")
            if key in self._table and self._table[key] != drug:
                raise CatalogError(f"ambiguous lexicon surface form: {surface!r}")
            self._table[key] = drug

    def __len__(self):
        return len(self._table)

    def __contains__(self, surface: str) -> bool:
        return surface.strip().lower() in self._table

    def resolve(self, surface: str) -> DrugId | None:
        return self._table.get(surface.strip().lower())

    def longest_match(self, text: str) -> DrugId | None:
        """Resolve text to a drug, preferring the longest known prefix.

        Captured spans can carry trailing clutter ("Metformin hydrochloride
        tablets"); fall back to the longest surface form the text starts with.
        """
        exact = self.resolve(text)
        if exact is not None:
            return exact
        low = text.strip().lower()
        best = None
        for surface, drug in self._table.items():
            if low.startswith(surface) and (best is None or len(surface) > best[0]):
                best = (len(surface), drug)
        return best[1] if best else None

    def drugs(self) -> list[DrugId]:
        seen = {}
        for drug in self._table.values():
            seen[drug.cui] = drug
        return sorted(seen.values(), key=lambda d: d.cui)

    def search(self, prefix: str) -> list[DrugId]:
        p = prefix.strip().lower()
        hits = {d.cui: d for s, d in self._table.items() if s.startswith(p)}
        return sorted(hits.values(), key=lambda d: d.label)

    @classmethod
    def from_csv(cls, path) -> "Lexicon":
        """Load a ``surface,cui,label`` CSV."""
        entries: dict[str, DrugId] = {}
        with open(path, newline="", encoding="utf-8") as fh:
            for lineno, row in enumerate(csv.reader(fh), start=1):
                if not row or row[0].startswith("#"):
                    continue
                if len(row) != 3:
                    raise CatalogError(f"{path}:{lineno}: expected surface,cui,label")
                surface, cui, label = (c.strip() for c in row)
                drug = DrugId(cui, label)
                key = surface.lower()
                if key in entries and entries[key] != drug:
                    raise CatalogError(
                        f"{path}:{lineno}: surface form {surface!r} maps to two CUIs"
                    )
                entries[key] = drug
        return cls(entries)


@dataclass
class ExtractionResult:
    ddis: list[PkDdi] = field(default_factory=list)
    unmatched: list[str] = field(default_factory=list)
    multi_match: list[str] = field(default_factory=list)
    partial: bool = False

    @property
    def counts(self) -> dict[str, int]:
        return {
            "ddis": len(self.ddis),
            "unmatched": len(self.unmatched),
            "multi_match": len(self.multi_match),
        }


def load_catalog(path) -> list[Pattern]:
    """Load the pattern catalog CSV
    ``pattern_id,template,precipitant_slot,effect_phrase,impact[,symmetric]``."""
    patterns = []
    seen_ids = set()
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].startswith("#"):
                continue
            if len(row) not in (5, 6):
                raise CatalogError(f"{path}:{lineno}: expected 5 or 6 columns, got {len(row)}")
            try:
                pid = int(row[0])
            except ValueError as exc:
                raise CatalogError(f"{path}:{lineno}: bad pattern_id {row[0]!r}") from exc
            if pid in seen_ids:
                raise CatalogError(f"{path}:{lineno}: duplicate pattern_id {pid}")
            seen_ids.add(pid)
            symmetric = len(row) == 6 and row[5].strip().lower() in (
                "1", "true", "yes", "symmetric"
            )
            try:
                patterns.append(
                    Pattern(pid, row[1], row[2].strip(), row[3].strip(), row[4].strip(), symmetric)
                )
            except CatalogError as exc:
                raise CatalogError(f"{path}:{lineno}: {exc}") from exc
    return sorted(patterns, key=lambda p: p.pattern_id)


def match_sentence(
    sentence: str,
    catalog: list[Pattern],
    lexicon: Lexicon,
    diagnostics: list[str] | None = None,
) -> list[PkDdi]:
    """Match one sentence against the catalog and emit the resulting facts.

    All non-overlapping matches of every pattern are emitted; a match whose
    drug mention cannot be resolved against the lexicon yields no fact (a
    diagnostic is recorded instead).
    """
    if not catalog:
        raise CatalogError("empty pattern catalog")
    facts: list[PkDdi] = []
    for pattern in catalog:
        for m in pattern.regex().finditer(sentence):
            drug_x = lexicon.longest_match(m.group("DrugX"))
            drug_y = lexicon.longest_match(m.group("DrugY"))
            if drug_x is None or drug_y is None:
                missing = m.group("DrugX") if drug_x is None else m.group("DrugY")
                if diagnostics is not None:
                    diagnostics.append(
                        f"pattern {pattern.pattern_id}: unresolved drug mention {missing!r}"
                    )
                continue
            if drug_x == drug_y:
                continue
            precipitant, obj = (
                (drug_x, drug_y) if pattern.precipitant_slot == "DrugX" else (drug_y, drug_x)
            )
            facts.append(
                PkDdi(
                    precipitant=precipitant,
                    effect=normalize_effect(pattern.effect_phrase),
                    impact=pattern.impact,
                    object=obj,
                    provenance="extracted",
                )
            )
    return facts


def extract_corpus(sentences, catalog: list[Pattern], lexicon: Lexicon) -> ExtractionResult:
    """Run match_sentence over a sentence stream and aggregate the results."""
    result = ExtractionResult()
    try:
        for raw in sentences:
            sentence = raw.strip()
            if not sentence:
                continue
            facts = match_sentence(sentence, catalog, lexicon)
            if not facts:
                result.unmatched.append(sentence)
                continue
            if len(facts) > 1:
                result.multi_match.append(sentence)
            result.ddis.extend(facts)
    except OSError:
        # I/O failure mid-stream: hand back whatever was extracted, flagged.
        result.partial = True
    return result
