# Autogenerated file, do not edit!
__version__ = '0.1'
__gitrev__ = ''
