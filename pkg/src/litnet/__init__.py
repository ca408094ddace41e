"""litnet: from article PDFs to a signed, weighted, clustered findings network."""

__version__ = "0.1.0"
