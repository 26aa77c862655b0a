# coding=utf-8
"""
Operator Base Class
===================

Base class for operators, the objects that drive a campaign of simulations.

- When an object of a child class is created the base class checks that required and recommended methods are
  present in the child class (or falls back on the ones of this class, with a debug message).
- load_config() reads the yaml config of the operator, falling back to the default file in integra.core.defaults.
- do_scan(param) merges a dictionary into properties['scan'] before the child runs its campaign.
- It implements __enter__ and __exit__ so an operator can be used in a with block; leaving the block releases the
  worker processes.

Example usage can be found in integra.model.campaign_model
"""
import logging

from integra.core.base.tools import check_method_presence, read_config


class OperatorBase:
    default_config = 'integra_config.yml'

    def __new__(cls, *args, **kwargs):
        """
        Gets called before the object (of the child class) is created and refuses classes that miss required
        methods. Note that recommended methods may come from this base class.
        """
        required = ['__init__', 'do_scan']
        recommended = ['load_config', 'save_scan', 'disconnect_devices']
        check_method_presence(cls, OperatorBase, required, recommended)
        return super().__new__(cls)

    def load_config(self, filename=None):
        """
        Load the operator properties from a yaml file.

        :param filename: path to the config file (default: the class's default_config in integra.core.defaults)
        :type filename: str
        """
        if not hasattr(self, 'properties'):
            self.properties = {}
        properties, filename = read_config(filename, self.default_config)
        self.properties.update(properties)
        self.properties['config_file'] = filename
        self.logger.debug(f'properties loaded from {filename}')

    def merge_scan_parameters(self, param):
        """Overwrite values of properties['scan'] with the ones of a dictionary (None values are skipped)."""
        if param is None:
            return
        if not isinstance(param, dict):
            raise TypeError('scan parameters should be given as a dictionary')
        self.logger.info('Updating scan properties with supplied parameters dictionary.')
        self.properties.setdefault('scan', {}).update({k: v for k, v in param.items() if v is not None})

    def save_scan(self, *args, **kwargs):
        self.logger.warning(f'{self.__class__.__name__} has no save_scan method: nothing saved')

    def disconnect_devices(self):
        """Release whatever the operator holds on to (nothing by default)."""
        self.logger.debug(f'{self.__class__.__name__} has nothing to disconnect')

    # the next two methods are needed so the context manager 'with' works.
    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        """Gets called when exiting a with block (when the code completed but also when an error occurred)"""
        self.logger.debug('Calling disconnect_devices() before exiting with block')
        self.disconnect_devices()
