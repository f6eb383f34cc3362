"""Window encoding, fine-tuning, and the unavailable-weights diagnostic."""

import pytest

from prombridge.finetune import (
    IGNORE,
    BridgeConfig,
    PretrainedUnavailable,
    encode_window,
    finetune,
    load_pretrained,
    predict,
)
from prombridge.formats import read_labels_tsv, read_manifest

from conftest import write_corpus


@pytest.fixture
def corpus(tmp_path):
    manifest, label_paths, gold = write_corpus(tmp_path, n_sents=30)
    return read_manifest(manifest), read_labels_tsv(label_paths["s1"]), gold


def p2_f1(preds, gold):
    tp = sum(1 for k, v in preds.rows.items() if v == "p2" and gold[k] == "p2")
    fp = sum(1 for k, v in preds.rows.items() if v == "p2" and gold[k] != "p2")
    fn = sum(1 for k, v in preds.rows.items() if v != "p2" and gold[k] == "p2")
    precision = tp / max(1, tp + fp)
    recall = tp / max(1, tp + fn)
    return 2 * precision * recall / max(1e-9, precision + recall)


class TestEncoding:
    def test_first_subword_carries_label(self, corpus, tiny_pretrained):
        renditions, gold, _ = corpus
        tokenizer, _ = load_pretrained(tiny_pretrained)
        rendition = renditions[0]
        enc = encode_window(tokenizer, rendition, 0, "current", gold, max_length=128)
        sentence = rendition.sentences[0]
        assert len(enc.word_positions) == len(sentence.words)
        labelled = [i for i, lab in enumerate(enc.labels) if lab != IGNORE]
        assert labelled == [pos for pos, _ in enc.word_positions]
        # multi-piece words ('w3' -> 'w' + '##3') leave continuations masked
        assert len(enc.input_ids) > len(sentence.words) + 2

    def test_plus2_includes_two_previous_sentences(self, corpus, tiny_pretrained):
        renditions, gold, _ = corpus
        tokenizer, _ = load_pretrained(tiny_pretrained)
        rendition = renditions[0]
        current_only = encode_window(tokenizer, rendition, 2, "current", gold, 128)
        plus2 = encode_window(tokenizer, rendition, 2, "plus2", gold, 128)
        sep_id = tokenizer.sep_token_id
        assert plus2.input_ids.count(sep_id) == 3  # two context seps + final
        assert current_only.input_ids.count(sep_id) == 1
        # same current-sentence word count in both regimes
        assert len(plus2.word_positions) == len(current_only.word_positions)
        # labels on context tokens stay masked
        n_labelled = sum(1 for lab in plus2.labels if lab != IGNORE)
        assert n_labelled == len(rendition.sentences[2].words)

    def test_chapter_boundary_blocks_context(self, tmp_path, tiny_pretrained):
        manifest, label_paths, _ = write_corpus(
            tmp_path, n_sents=6, chapter_breaks=(3,)
        )
        renditions = read_manifest(manifest)
        gold = read_labels_tsv(label_paths["s1"])
        tokenizer, _ = load_pretrained(tiny_pretrained)
        enc = encode_window(tokenizer, renditions[0], 3, "plus2", gold, 128)
        # sentence 3 opens chapter 2: no previous-sentence context
        assert enc.input_ids.count(tokenizer.sep_token_id) == 1

    def test_truncation_preserves_current_sentence(self, corpus, tiny_pretrained):
        renditions, gold, _ = corpus
        tokenizer, _ = load_pretrained(tiny_pretrained)
        rendition = renditions[0]
        full = encode_window(tokenizer, rendition, 2, "plus2", gold, max_length=512)
        limit = len(full.input_ids) - full.word_positions[0][0] + 1
        truncated = encode_window(tokenizer, rendition, 2, "plus2", gold, max_length=limit)
        assert len(truncated.input_ids) == limit
        assert len(truncated.word_positions) == len(full.word_positions)
        assert [w for _, w in truncated.word_positions] == [w for _, w in full.word_positions]


class TestFinetune:
    def test_learnability(self, corpus, tiny_pretrained):
        renditions, gold, _ = corpus
        config = BridgeConfig(pretrained=tiny_pretrained, learning_rate=1e-3,
                              epochs=100, seed=3)
        tokenizer, model = finetune(renditions, gold, config)
        preds = predict(tokenizer, model, renditions, config, "bridge")
        assert p2_f1(preds, gold) >= 0.95

    def test_zero_epochs_still_exports_valid_predictions(self, corpus, tiny_pretrained):
        renditions, gold, _ = corpus
        config = BridgeConfig(pretrained=tiny_pretrained, epochs=0, seed=3)
        tokenizer, model = finetune(renditions, gold, config)
        preds = predict(tokenizer, model, renditions, config, "untrained")
        assert len(preds.rows) == len(gold)
        assert set(preds.rows.values()) <= {"p0", "p1", "p2"}

    def test_unavailable_pretrained_diagnostic(self, corpus, tmp_path):
        renditions, gold, _ = corpus
        config = BridgeConfig(pretrained=str(tmp_path / "no-such-model"))
        with pytest.raises(PretrainedUnavailable, match="unavailable"):
            finetune(renditions, gold, config)

    def test_bad_regime_rejected(self):
        with pytest.raises(ValueError, match="regime"):
            BridgeConfig(pretrained="x", regime="plus9")

    def test_bad_alignment_policy_rejected(self):
        with pytest.raises(ValueError, match="alignment"):
            BridgeConfig(pretrained="x", label_alignment="last_subword")
