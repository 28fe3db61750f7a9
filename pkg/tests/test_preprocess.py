"""URL stripping, mention filtering and tokenization."""

import random

from tweetevents.preprocess import (
    FilterReason,
    TokenizerConfig,
    filter_mentions,
    load_tokenizer_config,
    strip_urls,
    tokenize,
)

from conftest import make_tweet


class TestStripUrls:
    def test_single_url_removed(self):
        assert strip_urls("fire https://t.co/abc now") == "fire now"

    def test_identity_without_urls(self):
        assert strip_urls("no links here") == "no links here"
        # untouched text keeps its original whitespace
        assert strip_urls("tabs\tand  spaces") == "tabs\tand  spaces"

    def test_url_only_text_becomes_empty(self):
        assert strip_urls("https://a.b https://c.d") == ""

    def test_http_scheme_and_edges(self):
        assert strip_urls("http://x.yz end") == "end"
        assert strip_urls("start http://x.yz") == "start"

    def test_idempotent_on_random_inputs(self):
        rng = random.Random(2024)
        pieces = ["http://", "https://", "x", " ", "://", "t.co/ab", "#tag", "\t", "word"]
        for _ in range(2000):
            text = "".join(rng.choice(pieces) for _ in range(rng.randrange(0, 12)))
            once = strip_urls(text)
            assert strip_urls(once) == once


class TestFilterMentions:
    def test_mention_tweet_dropped(self):
        decision = filter_mentions(make_tweet(mentions=("user1",)))
        assert not decision.kept
        assert decision.reason is FilterReason.DROPPED_MENTION

    def test_plain_tweet_kept(self):
        decision = filter_mentions(make_tweet(mentions=()))
        assert decision.kept
        assert decision.reason is FilterReason.KEPT

    def test_depends_only_on_mentions_field(self):
        rng = random.Random(5)
        for _ in range(200):
            text = " ".join(rng.choice(["@ghost", "plain", "#tag"]) for _ in range(5))
            mentions = ("m",) if rng.random() < 0.5 else ()
            tweet = make_tweet(text=text, mentions=mentions)
            assert filter_mentions(tweet).kept == (not mentions)

    def test_drop_ratio_statistic(self):
        # 34 mention tweets in a thousand: the reported drop ratio is 3.4%
        tweets = [
            make_tweet(id=f"t{i}", mentions=("x",) if i < 34 else ())
            for i in range(1000)
        ]
        dropped = sum(1 for t in tweets if not filter_mentions(t).kept)
        assert dropped == 34
        assert dropped / len(tweets) == 0.034


class TestTokenize:
    def test_stopwords_removed(self):
        config = TokenizerConfig(stopwords=frozenset({"in"}))
        assert tokenize("Fire in Tehran", config) == ["fire", "tehran"]

    def test_empty_text(self):
        assert tokenize("") == []

    def test_hashtag_body_is_a_word(self):
        assert tokenize("#Tehran earthquake Tehran") == ["tehran", "earthquake", "tehran"]

    def test_underscores_split(self):
        assert tokenize("#new_york today") == ["new", "york", "today"]

    def test_casefold_and_digits(self):
        assert tokenize("RT2020 Ökonomie") == ["rt2020", "ökonomie"]

    def test_never_emits_stopwords_or_empties(self):
        rng = random.Random(77)
        config = TokenizerConfig(stopwords=frozenset({"the", "a", "against"}))
        alphabet = "the a big #x @y ! 123 -- against über ... été"
        for _ in range(500):
            text = " ".join(rng.choice(alphabet.split()) for _ in range(rng.randrange(0, 10)))
            tokens = tokenize(text, config)
            assert all(tokens)
            assert not set(tokens) & config.stopwords

    def test_config_file_loading(self, stopwords_path):
        config = load_tokenizer_config(stopwords_path)
        assert "the" in config.stopwords
        assert tokenize("The Fire", config) == ["fire"]
