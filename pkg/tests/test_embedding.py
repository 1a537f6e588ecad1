import random

import numpy as np
import pytest

from alertpaths import DimensionMismatch, HashingEmbedder, MsgVector, similarity, tokenize

from .oracles import dense_cosine


def test_tokenize_words_and_trigrams():
    tokens = tokenize("ICMP PING")
    assert "icmp" in tokens and "ping" in tokens
    assert "icm" in tokens and "cmp" in tokens


def test_tokenize_case_folding():
    assert tokenize("SQL Injection Attempt") == tokenize("sql injection attempt")


def test_tokenize_single_character_msg():
    assert tokenize("x") == ["x"]


def test_embed_is_deterministic():
    emb = HashingEmbedder()
    a = emb.embed("RPC sadmind query with root credentials attempt UDP")
    b = emb.embed("RPC sadmind query with root credentials attempt UDP")
    assert np.array_equal(a.values, b.values)
    assert a.norm == b.norm


def test_embed_dimension_configurable():
    assert HashingEmbedder(64).embed("test msg").dim == 64
    with pytest.raises(ValueError):
        HashingEmbedder(0)


def test_similarity_identity():
    emb = HashingEmbedder()
    v = emb.embed("ICMP PING")
    assert similarity(v, v) == pytest.approx(1.0, abs=1e-9)


def test_similarity_orthogonal_one_hot():
    a = MsgVector(np.array([1.0, 0.0, 0.0]), 1.0)
    b = MsgVector(np.array([0.0, 1.0, 0.0]), 1.0)
    assert similarity(a, b) == 0.0


def test_similarity_symmetric_and_bounded():
    emb = HashingEmbedder()
    rng = random.Random(11)
    words = "alpha beta gamma delta epsilon scan ping flood root attempt".split()
    for _ in range(100):
        m1 = " ".join(rng.choice(words) for _ in range(rng.randint(1, 6)))
        m2 = " ".join(rng.choice(words) for _ in range(rng.randint(1, 6)))
        s12 = similarity(emb.embed(m1), emb.embed(m2))
        s21 = similarity(emb.embed(m2), emb.embed(m1))
        assert s12 == s21
        assert abs(s12) <= 1.0 + 1e-9


def test_similarity_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        similarity(HashingEmbedder(64).embed("a b"), HashingEmbedder(128).embed("a b"))


def test_disjoint_token_sets_near_zero():
    emb = HashingEmbedder()
    m1, m2 = "aaa bbb", "xyz qrs"
    assert dense_cosine(m1, m2) == 0.0
    assert abs(similarity(emb.embed(m1), emb.embed(m2))) < 0.15


def test_related_signatures_rank_above_unrelated():
    emb = HashingEmbedder()
    a = "RPC sadmind UDP PING"
    b = "RPC sadmind query with root credentials attempt UDP"
    c = "ICMP PING"
    hashed_ab = similarity(emb.embed(a), emb.embed(b))
    hashed_ac = similarity(emb.embed(a), emb.embed(c))
    hashed_bc = similarity(emb.embed(b), emb.embed(c))
    assert hashed_ab > hashed_ac
    assert hashed_ab > hashed_bc
    # the exact dense oracle agrees with the ordering
    assert dense_cosine(a, b) > dense_cosine(a, c)
    assert dense_cosine(a, b) > dense_cosine(b, c)
