"""Command-line interface for ratsteer"""
