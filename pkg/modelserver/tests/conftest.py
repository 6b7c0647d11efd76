import string

import pytest
import torch
from transformers import (
    BertConfig,
    BertForNextSentencePrediction,
    BertForSequenceClassification,
    BertModel,
    BertTokenizerFast,
)

from modelserver.models import ServerConfig

HIDDEN_SIZE = 32


def make_tokenizer(tmp_path):
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    vocab += list(string.ascii_lowercase) + list(string.digits)
    vocab += ["##" + c for c in string.ascii_lowercase + string.digits]
    vocab_file = tmp_path / "vocab.txt"
    vocab_file.write_text("\n".join(vocab) + "\n")
    return BertTokenizerFast(vocab_file=str(vocab_file), do_lower_case=True,
                             model_max_length=64)


def tiny_bert_config(vocab_size, **kwargs):
    return BertConfig(
        vocab_size=vocab_size,
        hidden_size=HIDDEN_SIZE,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
        **kwargs,
    )


@pytest.fixture(scope="session")
def checkpoints(tmp_path_factory):
    """Tiny randomly initialized checkpoints standing in for the real
    pretrained encoders; fixed seed keeps outputs reproducible."""
    root = tmp_path_factory.mktemp("checkpoints")
    tokenizer = make_tokenizer(root)
    vocab_size = tokenizer.vocab_size

    torch.manual_seed(0)
    embed_dir = root / "embed"
    BertModel(tiny_bert_config(vocab_size)).save_pretrained(embed_dir)
    tokenizer.save_pretrained(embed_dir)

    nsp_dir = root / "nsp"
    BertForNextSentencePrediction(tiny_bert_config(vocab_size)).save_pretrained(nsp_dir)
    tokenizer.save_pretrained(nsp_dir)

    clf_dir = root / "classifier"
    BertForSequenceClassification(
        tiny_bert_config(vocab_size, num_labels=100)
    ).save_pretrained(clf_dir)
    tokenizer.save_pretrained(clf_dir)

    return {"embed": str(embed_dir), "nsp": str(nsp_dir),
            "classifier": str(clf_dir)}


@pytest.fixture(scope="session")
def server_config(checkpoints):
    return ServerConfig(
        embed_model=checkpoints["embed"],
        nsp_model=checkpoints["nsp"],
        classifier=checkpoints["classifier"],
        max_batch=64,
    )
