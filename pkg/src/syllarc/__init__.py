"""syllarc: articulatory VCV/CV syllable synthesis from polar-plane plans."""

__version__ = "0.1.0"
