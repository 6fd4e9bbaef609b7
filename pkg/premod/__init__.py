"""Pre-modular forms, their Painleve VI solutions and the Lame counts they give."""
__version__ = '0.1.0'
