import json

import pytest

from sessiontopics import (
    ParseError,
    ValidationError,
    build_keyword_category_table,
    load_classification,
    load_crosswalk,
    load_thesaurus,
)
from sessiontopics.corpus import Corpus, Document, DocumentKeyword
from sessiontopics.kos import Crosswalk, CrosswalkEntry, Descriptor, KeywordCategoryTable, Thesaurus

from oracles import recount_lookup_table


def make_thesaurus():
    return Thesaurus(
        [
            Descriptor("d1", "Migration", ("emigration", "immigration")),
            Descriptor("d2", "Labor Market", ("labour market",)),
        ]
    )


class TestThesaurus:
    def test_resolves_preferred_label_case_insensitively(self):
        thes = make_thesaurus()
        assert thes.resolve("migration") == "d1"
        assert thes.resolve("MIGRATION") == "d1"

    def test_resolves_synonyms(self):
        thes = make_thesaurus()
        assert thes.resolve("Immigration") == "d1"
        assert thes.resolve("labour market") == "d2"

    def test_unknown_term_resolves_to_none(self):
        assert make_thesaurus().resolve("astronomy") is None

    def test_duplicate_descriptor_id_rejected(self):
        with pytest.raises(ValidationError):
            Thesaurus([Descriptor("d1", "A"), Descriptor("d1", "B")])

    def test_label_collision_across_descriptors_rejected(self):
        with pytest.raises(ValidationError):
            Thesaurus([Descriptor("d1", "Migration"), Descriptor("d2", "migration")])

    def test_synonym_may_repeat_own_label(self):
        thes = Thesaurus([Descriptor("d1", "Youth", ("youth",))])
        assert thes.resolve("youth") == "d1"


class TestLoaders:
    def test_load_thesaurus(self, tmp_path):
        path = tmp_path / "thes.json"
        path.write_text(
            json.dumps(
                [{"id": "d1", "label": "Migration", "synonyms": ["immigration"]}]
            )
        )
        thes = load_thesaurus(path)
        assert thes.resolve("immigration") == "d1"

    def test_load_thesaurus_rejects_missing_id(self, tmp_path):
        path = tmp_path / "thes.json"
        path.write_text(json.dumps([{"label": "Migration"}]))
        with pytest.raises(ParseError):
            load_thesaurus(path)

    def test_load_classification_links_subclasses(self, tmp_path):
        path = tmp_path / "cls.json"
        path.write_text(
            json.dumps(
                [
                    {"code": "Soc", "label": "Sociology"},
                    {"code": "FamSoc", "label": "Family Sociology", "parent": "Soc"},
                ]
            )
        )
        cls = load_classification(path)
        assert cls.get("FamSoc").parent == "Soc"
        assert cls.main_class_of("FamSoc") == "Soc"
        assert cls.main_class_of("Soc") == "Soc"

    def test_load_classification_rejects_unknown_parent(self, tmp_path):
        path = tmp_path / "cls.json"
        path.write_text(json.dumps([{"code": "X", "label": "X", "parent": "nope"}]))
        with pytest.raises(ValidationError):
            load_classification(path)

    def test_load_crosswalk_validates_targets_against_thesaurus(self, tmp_path):
        path = tmp_path / "cw.json"
        path.write_text(
            json.dumps([{"vocab": "econ", "term": "x", "target": "ghost", "relation": "exact"}])
        )
        with pytest.raises(ValidationError):
            load_crosswalk(path, make_thesaurus())


class TestCrosswalk:
    def test_exact_before_broader_before_narrower(self):
        cw = Crosswalk(
            [
                CrosswalkEntry("econ", "labour migration", "d9", "narrower"),
                CrosswalkEntry("econ", "labour migration", "d1", "broader"),
                CrosswalkEntry("econ", "labour migration", "d2", "exact"),
            ]
        )
        assert cw.map("econ", "labour migration") == ["d2", "d1", "d9"]

    def test_file_order_breaks_ties_within_relation(self):
        cw = Crosswalk(
            [
                CrosswalkEntry("econ", "t", "d5", "exact"),
                CrosswalkEntry("econ", "t", "d3", "exact"),
            ]
        )
        assert cw.map("econ", "t") == ["d5", "d3"]

    def test_lookup_is_scoped_by_vocabulary(self):
        cw = Crosswalk([CrosswalkEntry("econ", "t", "d1", "exact")])
        assert cw.map("polsci", "t") == []

    def test_term_matching_is_case_insensitive(self):
        cw = Crosswalk([CrosswalkEntry("econ", "Labour Migration", "d1", "exact")])
        assert cw.map("econ", "labour migration") == ["d1"]


class TestKeywordCategoryTable:
    def docs(self):
        kw = lambda t: DocumentKeyword("thes", t)
        return [
            Document("x1", "t", keywords=(kw("migration"),), categories=("Mig",)),
            Document("x2", "t", keywords=(kw("migration"),), categories=("Mig",)),
            Document("x3", "t", keywords=(kw("migration"), kw("labor market")), categories=("Econ",)),
            Document("x4", "t", keywords=(kw("labor market"),), categories=("Econ",)),
        ]

    def thes(self):
        return Thesaurus(
            [Descriptor("d_mig", "migration"), Descriptor("d_lab", "labor market")]
        )

    def test_majority_category_wins(self):
        table = build_keyword_category_table(Corpus(self.docs()), self.thes())
        assert table.lookup("d_mig") == "Mig"
        assert table.lookup("d_lab") == "Econ"

    def test_tie_broken_by_smaller_code(self):
        kw = DocumentKeyword("thes", "migration")
        docs = [
            Document("x1", "t", keywords=(kw,), categories=("B",)),
            Document("x2", "t", keywords=(kw,), categories=("A",)),
        ]
        table = build_keyword_category_table(Corpus(docs), self.thes())
        assert table.lookup("d_mig") == "A"

    def test_duplicates_inside_one_document_count_once(self):
        kw = DocumentKeyword("thes", "migration")
        docs = [
            # one doc repeating the keyword and the category must not outvote two docs
            Document("x1", "t", keywords=(kw, kw, kw), categories=("B", "B")),
            Document("x2", "t", keywords=(kw,), categories=("A",)),
            Document("x3", "t", keywords=(kw,), categories=("A",)),
        ]
        table = build_keyword_category_table(Corpus(docs), self.thes())
        assert table.lookup("d_mig") == "A"

    def test_matches_bruteforce_recount_on_fixture_corpus(self, corpus, thesaurus, lookup):
        resolved_docs = []
        for doc in corpus:
            ids = [
                thesaurus.resolve(k.term)
                for k in doc.keywords
                if k.vocabulary == "thes" and thesaurus.resolve(k.term)
            ]
            resolved_docs.append((ids, list(doc.categories)))
        assert lookup.to_json() == recount_lookup_table(resolved_docs)

    def test_json_round_trip(self, lookup):
        data = lookup.to_json()
        assert KeywordCategoryTable.from_json(data).to_json() == data
        assert list(data) == sorted(data)

    def test_unknown_keyword_maps_to_none(self, lookup):
        assert lookup.lookup("no_such_descriptor") is None
