"""Analysis pipeline.

retrieve -> preprocess -> filter -> extract -> score -> fuzzy -> swrl -> emit

Per-document stages run in a thread pool. Their results are merged sorted by document id and
clause index, so the output never depends on the number of workers.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Mapping, Sequence

from tqdm import tqdm

from src.config.config_defaults import QUERY_RECALL_THRESHOLD, ConfigDefault
from src.config.logger import log
from src.data.corpus import Corpus, Document, load_corpus, load_queries, retrieve
from src.data.query import QueryAst
from src.enums.enums import ConceptKind, FactPredicate, PolarityTerm
from src.features.extract import FeatureOpinion, attach_phrases, extract_pairs
from src.features.pos_tagger import PosTagger
from src.features.preprocess import Preprocessor, load_stopwords
from src.features.relevance import WeightVector, load_weights, ngrams, score
from src.inference.polarity_map import (
    PolarityMap,
    city_entry,
    empty_map,
    feature_entry,
)
from src.knowledge.lexicon import (
    SentimentLexicon,
    load_opinion_lexicon,
    load_phrases,
    load_sentiwordnet,
)
from src.knowledge.ontology import FuzzyOntology, load_ontology
from src.model.fuzzy_inference import PolarityResult, words_polarity
from src.model.fuzzy_rules import RuleSet, load_fuzzy_rules
from src.model.membership import MFBank, load_mf_bank
from src.model.swrl import (
    ApplyResult,
    CausalRule,
    Fact,
    SpeedTable,
    apply_rules,
    cause_report,
    city_polarity,
    load_causal_rules,
    load_speed_table,
    speed_fact,
)
from src.utils.utils_exceptions import (
    InvalidArgument,
    InvalidDataException,
    RuleConflict,
    StageError,
    UnknownTerm,
)

# Concept whose opinion words carry the speed of the traffic
SPEED_SUBJECT = "Vehicle"

_STAGE_ERRORS = (
    InvalidDataException,
    InvalidArgument,
    RuleConflict,
    ValueError,
    ArithmeticError,
    KeyError,
    OSError,
)


@contextmanager
def stage(name: str):
    """Wraps data errors raised inside the block into a StageError naming the stage."""
    try:
        yield
    except StageError:
        raise
    except _STAGE_ERRORS as e:
        raise StageError(name, e) from e


@dataclass(frozen=True)
class Resources:
    corpus: Corpus
    queries: tuple[QueryAst, ...]
    weights: WeightVector
    ontology: FuzzyOntology
    lexicon: SentimentLexicon
    preprocessor: Preprocessor
    mf_bank: MFBank
    fuzzy_rules: RuleSet
    causal_rules: tuple[CausalRule, ...]
    speed_table: SpeedTable


def check_rule_terms(rules: RuleSet, bank: MFBank):
    for rule in rules:
        for slot, term in rule.antecedent:
            if term not in bank:
                raise UnknownTerm(
                    f"rule {rule.id}: term {term.value} of slot {slot!r} "
                    "has no membership function"
                )


def load_resources(config: ConfigDefault) -> Resources:
    """Loads every input named by the config. Missing files raise before anything is parsed."""
    with stage("load"):
        config.validate_paths()
        phrases = load_phrases(
            config.path_positive_phrases,
            config.path_neutral_phrases,
            config.path_negative_phrases,
        )
        lexicon = SentimentLexicon(
            scores=load_sentiwordnet(config.path_sentiwordnet),
            opinion=load_opinion_lexicon(
                config.path_positive_words, config.path_negative_words
            ),
            phrases=phrases,
        )
        preprocessor = Preprocessor(
            PosTagger.from_file(config.path_tag_lexicon),
            load_stopwords(config.path_stopwords),
            phrases.phrases,
        )
        mf_bank = load_mf_bank(config.path_mf_bank)
        fuzzy_rules = load_fuzzy_rules(config.path_fuzzy_rules)
        check_rule_terms(fuzzy_rules, mf_bank)
        resources = Resources(
            corpus=load_corpus(config.path_corpus),
            queries=tuple(load_queries(config.path_queries)),
            weights=load_weights(config.path_weights),
            ontology=load_ontology(config.path_ontology),
            lexicon=lexicon,
            preprocessor=preprocessor,
            mf_bank=mf_bank,
            fuzzy_rules=fuzzy_rules,
            causal_rules=load_causal_rules(config.path_causal_rules),
            speed_table=load_speed_table(config.path_speed_table),
        )
    log.info(
        f"Loaded {len(resources.queries)} queries "
        f"(selected with recall > {QUERY_RECALL_THRESHOLD})"
    )
    return resources


@dataclass(frozen=True)
class DocumentAnalysis:
    document: Document
    relevance: float
    relevant: bool
    incomplete_sentences: int
    pairs: tuple[FeatureOpinion, ...]

    # Feature -> term of this document alone
    predictions: Mapping[str, PolarityTerm]


def _is_map_feature(pair: FeatureOpinion) -> bool:
    return pair.feature.kind != ConceptKind.CITY and bool(pair.opinion_words)


def _group_by_feature(pairs: Sequence[FeatureOpinion]) -> dict[str, list[FeatureOpinion]]:
    grouped: dict[str, list[FeatureOpinion]] = defaultdict(list)
    for pair in pairs:
        if _is_map_feature(pair):
            grouped[pair.feature.name].append(pair)
    return grouped


def _merged_polarity(pairs: Sequence[FeatureOpinion], resources: Resources) -> PolarityResult:
    words = [w for pair in pairs for w in pair.opinion_words]
    return words_polarity(
        words, resources.fuzzy_rules, resources.mf_bank, sentence_count=len(pairs)
    )


def analyze_document(document: Document, resources: Resources) -> DocumentAnalysis:
    with stage("preprocess"):
        processed = resources.preprocessor.process(document)
    with stage("filter"):
        relevance = score(processed, resources.weights)
    if relevance <= 0:
        log.debug(f"{document.id}: filtered out, relevance {relevance}")
        return DocumentAnalysis(
            document, relevance, False, processed.incomplete_sentences, (), {}
        )
    if not processed.clauses:
        log.warning(f"{document.id}: dropped, no complete clause")

    lexicon = resources.lexicon
    pairs: list[FeatureOpinion] = []
    with stage("extract"):
        for clause in processed.clauses:
            clause_pairs = extract_pairs(clause, resources.ontology, lexicon)
            if clause_pairs:
                grams = {
                    n: ngrams(clause.tokens, n)
                    for n in range(2, lexicon.phrases.max_length + 1)
                }
                clause_pairs = attach_phrases(clause_pairs, grams, lexicon.phrases)
            pairs.extend(clause_pairs)

    with stage("fuzzy"):
        predictions = {
            name: _merged_polarity(feature_pairs, resources).term
            for name, feature_pairs in sorted(_group_by_feature(pairs).items())
        }
    return DocumentAnalysis(
        document,
        relevance,
        True,
        processed.incomplete_sentences,
        tuple(pairs),
        predictions,
    )


@dataclass(frozen=True)
class CorpusAnalysis:
    documents: tuple[DocumentAnalysis, ...]
    features: Mapping[str, PolarityResult]
    facts: ApplyResult
    causes: Mapping[str, list[tuple[str, str]]]
    city: PolarityResult

    @property
    def incomplete_sentences(self) -> int:
        return sum(d.incomplete_sentences for d in self.documents)

    @property
    def predictions(self) -> dict[str, Mapping[str, PolarityTerm]]:
        return {d.document.id: d.predictions for d in self.documents}


def input_facts(
    features: Mapping[str, PolarityResult],
    grouped: Mapping[str, Sequence[FeatureOpinion]],
    speed_table: SpeedTable,
) -> set[Fact]:
    """OpinionOf facts of the determined features plus the speed of the traffic."""
    facts = {
        Fact(FactPredicate.OPINION_OF, name, result.term.value)
        for name, result in features.items()
        if result.is_determined
    }
    speed_words = [w for pair in grouped.get(SPEED_SUBJECT, []) for w in pair.opinion_words]
    speed = speed_fact(speed_words, speed_table, SPEED_SUBJECT)
    if speed is not None:
        facts.add(speed)
    return facts


def analyze_corpus(
    resources: Resources,
    city: str | None = None,
    num_workers: int = 1,
) -> CorpusAnalysis:
    with stage("retrieve"):
        documents = retrieve(resources.corpus, resources.queries, city)
    log.info(f"Retrieved {len(documents)} of {len(resources.corpus)} documents")

    with ThreadPoolExecutor(max_workers=num_workers) as executor:
        analysed = list(
            tqdm(
                executor.map(lambda d: analyze_document(d, resources), documents),
                total=len(documents),
                desc="Documents",
                disable=not log.isEnabledFor(logging.INFO),
            )
        )
    analysed.sort(key=lambda a: a.document.id)
    relevant = [a for a in analysed if a.relevant]
    log.info(f"{len(relevant)} documents passed the relevance filter")

    pairs = sorted(
        (pair for a in relevant for pair in a.pairs),
        key=lambda p: (p.clause.source_doc, p.clause.index),
    )
    grouped = _group_by_feature(pairs)
    with stage("fuzzy"):
        features = {
            name: _merged_polarity(grouped[name], resources) for name in sorted(grouped)
        }
    with stage("swrl"):
        facts = apply_rules(
            input_facts(features, grouped, resources.speed_table), resources.causal_rules
        )
        causes = {
            name: cause_report(name, facts.facts, resources.ontology) for name in features
        }
    log.info(
        f"Scored {len(features)} features, derived {len(facts.derived)} facts "
        f"in {facts.iterations} rounds"
    )
    return CorpusAnalysis(
        documents=tuple(analysed),
        features=features,
        facts=facts,
        causes=causes,
        city=city_polarity(features),
    )


def build_polarity_map(
    analysis: CorpusAnalysis, city: str, decimals: int, generated_at: str
) -> PolarityMap:
    if not analysis.features:
        return empty_map(city, generated_at, analysis.incomplete_sentences)
    return PolarityMap(
        city=city,
        features=[
            feature_entry(name, result, analysis.causes[name], decimals)
            for name, result in analysis.features.items()
        ],
        city_polarity=city_entry(analysis.city, decimals),
        generated_at=generated_at,
        derived_facts=[str(f) for f in analysis.facts.derived],
        incomplete_sentences=analysis.incomplete_sentences,
    )


def corpus_cities(corpus: Corpus | Sequence[Document]) -> list[str]:
    """Distinct cities, case-insensitive, in the spelling first seen, sorted."""
    cities: dict[str, str] = {}
    for document in corpus:
        cities.setdefault(document.city.lower(), document.city)
    return [cities[key] for key in sorted(cities)]
