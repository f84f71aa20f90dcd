"""Server-authoritative timed skill evaluation platform."""

__version__ = "0.1.0"
