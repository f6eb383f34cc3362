"""Pretrained-LM bridge for prominence prediction.

Fine-tunes a BERT-family masked language model as a token classifier on
prominence labels produced by the annotation toolkit, and exports
predictions in the same TSV grammar the toolkit's evaluator consumes.
The two packages share nothing but file formats.
"""

__version__ = "0.1.0"
