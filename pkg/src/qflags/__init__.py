"""Flag varieties over finite fields and the Steinberg representation, exactly."""

__version__ = "0.1.0"
