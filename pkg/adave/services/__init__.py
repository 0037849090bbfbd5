# adave/services/__init__.py
